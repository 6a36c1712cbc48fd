#pragma once

#include "hybridbell/model.hpp"
#include "hybridbell/quadrature.hpp"

namespace hybridbell {

/// Off-diagonal factor exp(-(1 - T)|alpha|^2 / 2) left after tracing out the
/// line-loss environment.
double visibility(double alpha_mag, double t_line);

/// (2/sqrt(pi)) * integral_{-b}^{b} exp(-x^2) cos(k x) dx.
QuadratureResult cosine_gaussian_integral(double b, double k, const QuadratureSettings& settings = {});

/// Off-diagonal X-bin coefficient
///   c1 = V * [ (2/sqrt(pi)) int_{-b}^{b} e^{-x^2} cos(sqrt(2 T) |alpha| x) dx - e^{-T|alpha|^2/2} ].
/// b = +inf is accepted (full line).
double c1(double alpha_mag, double t_line, double b, const QuadratureSettings& settings = {});

/// Vacuum never clicks.
constexpr double c2_photocount() { return 1.0; }

double c3_photocount(double alpha_mag, double t_line, double eta, LossConvention convention);

/// 1 + c3 for the photocount B1, i.e. twice the no-click probability.
double c3_photocount_gap(double alpha_mag, double t_line, double eta, LossConvention convention);

/// erf(sqrt(T/2)|alpha|): vacuum expectation of the P-threshold B1 placed at
/// the midpoint sqrt(T)|alpha|/sqrt(2) between the two branches. c3 = -c2.
double c2_twohomodyne(double alpha_mag, double t_line);

/// Midpoint P threshold used by the two-homodyne B1.
double twohomodyne_p_threshold(double alpha_mag, double t_line);

/// Bin half-width maximizing c1: pi / (2 sqrt(2) sqrt(T) |alpha|), the first
/// zero of the cosine for the attenuated amplitude. Throws ValidationError
/// when the attenuated amplitude vanishes.
double optimal_bin(double alpha_mag, double t_line);

/// Full coefficient set for the photocount scenario (B0 = X bin, B1 = no-click).
Coefficients photocount_coefficients(double alpha_mag, const ChannelSpec& channel, double b,
                                     LossConvention convention,
                                     const QuadratureSettings& settings = {});

/// Full coefficient set for the two-homodyne scenario (B0 = X bin, B1 = P threshold).
Coefficients twohomodyne_coefficients(double alpha_mag, double t_line, double b,
                                      const QuadratureSettings& settings = {});

}  // namespace hybridbell
