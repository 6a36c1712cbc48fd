#pragma once

#include <optional>

#include "hybridbell/model.hpp"
#include "hybridbell/quadrature.hpp"

namespace hybridbell {

/// Smallest positive S - 2 representable next to 2.0 in double precision.
/// An optimized CHSH value counts as a violation only above this margin.
inline constexpr double kViolationMargin = 0x1p-51;

struct OptimizerSettings {
  double alpha_min = 0.05;
  double alpha_max = 12.0;
  double alpha_step = 0.05;
  double refine_tol = 1e-6;
  int nu_grid_points = 2001;
  double violation_margin = kViolationMargin;
  QuadratureSettings quadrature{};
};

void validate(const OptimizerSettings& settings);

/// max over gamma of the CHSH sum at fixed nu:
/// 2 sqrt((2 c1 cos nu sin nu)^2 + (c2 cos^2 nu - c3 sin^2 nu)^2).
double s_gamma(const Coefficients& coeffs, double nu);

/// Atomic angle attaining s_gamma: atan2(<sx B0>, <sz B1>). Throws
/// std::domain_error when both correlators vanish.
double gamma_opt(const Coefficients& coeffs, double nu);

/// CHSH sum at explicit gamma: 2 cos(gamma) <sz B1> + 2 sin(gamma) <sx B0>.
double s_at(const Coefficients& coeffs, double nu, double gamma);

struct Conditions {
  bool c1_ok = false;  ///< c3 (c2 + c3) < 2 c1^2
  bool c2_ok = false;  ///< c2 (c2 + c3) < 2 c1^2
};

Conditions conditions(const Coefficients& coeffs);

/// s_gamma(nu) = 2 sqrt(f) with f = A sin^4 nu + B sin^2 nu + c2^2.
struct QuarticForm {
  double a = 0.0;
  double b = 0.0;
};

QuarticForm quartic_form(const Coefficients& coeffs);

struct ClosedFormMax {
  double s = 0.0;
  double excess = 0.0;  ///< s - 2 without cancellation
  double nu_opt = 0.0;
  bool interior = false;
};

/// Maximum of s_gamma over nu in [0, pi/2]. Interior optimum
/// sin^2 nu = B / (-2A) when A < 0 and the ratio lies in (0, 1); otherwise the
/// better endpoint, 2 max(|c2|, |c3|).
ClosedFormMax s_max_closed(const Coefficients& coeffs);

/// Layered optimum over gamma, nu (closed form), b (optimal_bin) and a
/// multi-start numeric search over |alpha|. For TwoHomodyne nu_opt = pi/4.
/// Channel eta_a must be 1 here; see s_max_atomic for eta_a < 1.
ChshResult s_max_over_alpha(const ChannelSpec& channel, const Scenario& scenario,
                            const OptimizerSettings& settings = {});

/// Two-homodyne CHSH with atomic detection efficiency eta_a, optimized over
/// gamma: 2 (eta_a sqrt(c1^2 sin^2 2nu + c2^2) + (1 - eta_a) c2 cos 2nu).
double s_gamma_atomic(const Coefficients& coeffs, double nu, double eta_a);

/// s_gamma_atomic - 2 evaluated without cancellation.
double s_gamma_atomic_excess(const Coefficients& coeffs, double nu, double eta_a);

/// d/dnu of s_gamma_atomic / 4.
double atomic_stationarity_residual(const Coefficients& coeffs, double nu, double eta_a);

struct AtomicNuMax {
  double nu_opt = 0.0;
  double excess = 0.0;
  double residual = 0.0;
  bool boundary = false;
};

/// Numeric maximum of s_gamma_atomic over nu in [0, pi/2]: grid of
/// nu_grid_points, golden-section refinement, stationarity check.
AtomicNuMax maximize_atomic_nu(const Coefficients& coeffs, double eta_a, int nu_grid_points);

ChshResult s_max_atomic(const ChannelSpec& channel, const OptimizerSettings& settings = {});

/// Dispatches to s_max_over_alpha or s_max_atomic.
ChshResult optimize(const ChannelSpec& channel, const Scenario& scenario,
                    const OptimizerSettings& settings = {});

inline bool is_violation(const ChshResult& r, const OptimizerSettings& settings = {}) {
  return r.excess > settings.violation_margin;
}

/// sqrt(2/pi) * 2/alpha - exp(-eta alpha^2 / 4); positive when the large-|alpha|
/// sufficient condition for a photocount violation at T = 1 holds.
double asymptotic_condition_margin(double eta, double alpha_mag);

/// Largest |alpha| at which asymptotic_condition_margin changes sign, or
/// nullopt when it is positive everywhere.
std::optional<double> asymptotic_crossover(double eta);

struct Theorem1Witness {
  bool found = false;
  double alpha = 0.0;        ///< best |alpha| in the first violating window
  double s = 0.0;
  double excess = 0.0;
  double onset_alpha = 0.0;  ///< where S first exceeds 2 + margin
  std::optional<double> asymptotic_alpha;
  bool asymptotic_condition_holds = false;  ///< evaluated at alpha
};

/// Searches |alpha| upward (log-spaced, ratio 1.01) at T = 1 for the first
/// window with S > 2, then maximizes S inside it.
Theorem1Witness theorem1_witness(double eta, double alpha_search_max,
                                 LossConvention convention = LossConvention::PaperFaithful,
                                 const OptimizerSettings& settings = {});

enum class FreeParam { TLine, EtaA };

struct ThresholdResult {
  double value = 0.0;  ///< bracket midpoint
  double lo = 0.0;
  double hi = 0.0;
  double s_lo = 0.0;   ///< optimized S at lo (no violation)
  double s_hi = 0.0;   ///< optimized S at hi (violation)
  double excess_lo = 0.0;
  double excess_hi = 0.0;
};

/// Bisection on the violation predicate of the optimized S as a function of
/// the free parameter over [0, 1]. Throws std::runtime_error("no threshold in
/// range") when both ends agree.
ThresholdResult violation_threshold(const Scenario& scenario, FreeParam param,
                                    const ChannelSpec& fixed,
                                    const OptimizerSettings& settings = {}, double tol = 1e-4);

}  // namespace hybridbell
