#include "hybridbell/coefficients.hpp"

#include <cmath>
#include <numbers>

namespace hybridbell {
namespace {

// exp(-x^2) < 1e-600 beyond this; the integrand is exactly zero in double.
constexpr double kGaussianCutoff = 40.0;

}  // namespace

double visibility(double alpha_mag, double t_line) {
  return std::exp(-(1.0 - t_line) * alpha_mag * alpha_mag / 2.0);
}

QuadratureResult cosine_gaussian_integral(double b, double k, const QuadratureSettings& settings) {
  if (!(b > 0.0)) throw ValidationError("b out of (0, inf)");
  const double upper = std::min(b, kGaussianCutoff);
  // One panel per half period of the cosine keeps the first pass honest.
  const int panels = 1 + static_cast<int>(std::min(upper * std::abs(k) / std::numbers::pi + upper, 64.0));
  auto integrand = [k](double x) { return std::exp(-x * x) * std::cos(k * x); };
  auto half = integrate(integrand, 0.0, upper, settings, panels);
  const double scale = 4.0 / std::sqrt(std::numbers::pi);  // symmetric, doubled
  return {scale * half.value, scale * half.error_estimate, half.subdivisions};
}

double c1(double alpha_mag, double t_line, double b, const QuadratureSettings& settings) {
  const double attenuated = std::sqrt(t_line) * alpha_mag;
  const double k = std::numbers::sqrt2 * attenuated;
  const double bin = cosine_gaussian_integral(b, k, settings).value;
  return visibility(alpha_mag, t_line) * (bin - std::exp(-attenuated * attenuated / 2.0));
}

double c3_photocount_gap(double alpha_mag, double t_line, double eta, LossConvention convention) {
  const double mean_photons = eta * t_line * alpha_mag * alpha_mag;
  const double exponent = convention == LossConvention::PaperFaithful ? mean_photons / 2.0 : mean_photons;
  return 2.0 * std::exp(-exponent);
}

double c3_photocount(double alpha_mag, double t_line, double eta, LossConvention convention) {
  return c3_photocount_gap(alpha_mag, t_line, eta, convention) - 1.0;
}

double c2_twohomodyne(double alpha_mag, double t_line) {
  return std::erf(std::sqrt(t_line / 2.0) * alpha_mag);
}

double twohomodyne_p_threshold(double alpha_mag, double t_line) {
  return std::sqrt(t_line) * alpha_mag / std::numbers::sqrt2;
}

double optimal_bin(double alpha_mag, double t_line) {
  const double attenuated = std::sqrt(t_line) * alpha_mag;
  if (!(attenuated > 0.0)) throw ValidationError("bin undefined for vacuum amplitude");
  return std::numbers::pi / (2.0 * std::numbers::sqrt2 * attenuated);
}

Coefficients photocount_coefficients(double alpha_mag, const ChannelSpec& channel, double b,
                                     LossConvention convention, const QuadratureSettings& settings) {
  Coefficients out;
  out.c1 = c1(alpha_mag, channel.t_line, b, settings);
  out.c2 = c2_photocount();
  out.one_minus_c2 = 0.0;
  out.one_plus_c3 = c3_photocount_gap(alpha_mag, channel.t_line, channel.eta, convention);
  out.c3 = out.one_plus_c3 - 1.0;
  return out;
}

Coefficients twohomodyne_coefficients(double alpha_mag, double t_line, double b,
                                      const QuadratureSettings& settings) {
  const double x = std::sqrt(t_line / 2.0) * alpha_mag;
  Coefficients out;
  out.c1 = c1(alpha_mag, t_line, b, settings);
  out.c2 = std::erf(x);
  out.c3 = -out.c2;
  out.one_minus_c2 = std::erfc(x);
  out.one_plus_c3 = out.one_minus_c2;
  return out;
}

}  // namespace hybridbell
