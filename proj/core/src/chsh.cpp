#include "hybridbell/chsh.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hybridbell/coefficients.hpp"
#include "hybridbell/search.hpp"

namespace hybridbell {
namespace {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kStationarityTol = 1e-6;

double bin_for(double alpha_mag, double t_line) {
  return std::sqrt(t_line) * alpha_mag > 0.0 ? optimal_bin(alpha_mag, t_line)
                                             : std::numeric_limits<double>::infinity();
}

// c2 + c3 from the carried gaps.
double coefficient_sum(const Coefficients& c) { return c.one_plus_c3 - c.one_minus_c2; }

// c2^2 - 1
double c2_square_deficit(const Coefficients& c) {
  return -c.one_minus_c2 * (2.0 - c.one_minus_c2);
}

// S = 2 sqrt(1 + e); returns (S, S - 2).
std::pair<double, double> from_half_square_excess(double e) {
  const double root = std::sqrt(std::max(1.0 + e, 0.0));
  return {2.0 * root, 2.0 * e / (root + 1.0)};
}

// |c| - 1 for c in [-1, 1], using the carried gap for the sign that needs it.
double abs_minus_one_c2(const Coefficients& c) { return c.c2 >= 0.0 ? -c.one_minus_c2 : -1.0 - c.c2; }
double abs_minus_one_c3(const Coefficients& c) { return c.c3 <= 0.0 ? -c.one_plus_c3 : c.c3 - 1.0; }

ChshResult fill_result(const Coefficients& coeffs, double alpha, double b, double nu, double s,
                       double excess) {
  ChshResult r;
  r.s_value = s;
  r.excess = excess;
  r.nu_opt = nu;
  r.alpha_opt = alpha;
  r.b_opt = b;
  r.coeffs = coeffs;
  const auto cond = conditions(coeffs);
  r.c1_ok = cond.c1_ok;
  r.c2_ok = cond.c2_ok;
  try {
    r.gamma_opt = gamma_opt(coeffs, nu);
  } catch (const std::domain_error&) {
    r.gamma_opt = 0.0;
  }
  return r;
}

std::vector<double> alpha_grid(const OptimizerSettings& s) {
  const auto n = static_cast<std::size_t>(std::floor((s.alpha_max - s.alpha_min) / s.alpha_step + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = s.alpha_min + static_cast<double>(i) * s.alpha_step;
  return grid;
}

// Multi-start maximization of eval(alpha).excess: coarse grid, golden-section
// refinement around every grid local maximum, ties (relative refine_tol)
// resolved toward the smaller alpha.
template <class Eval>
ChshResult maximize_over_alpha(Eval&& eval, const OptimizerSettings& settings) {
  const auto grid = alpha_grid(settings);
  if (grid.empty()) throw std::invalid_argument("empty alpha grid");
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = eval(grid[i]).excess;

  auto objective = [&](double a) { return eval(a).excess; };
  bool have_best = false;
  double best_alpha = 0.0;
  double best_value = -std::numeric_limits<double>::infinity();
  const std::size_t n = grid.size();
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || values[i] > values[i - 1];
    const bool right_ok = i + 1 == n || values[i] >= values[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double lo = grid[i == 0 ? 0 : i - 1];
    const double hi = grid[i + 1 == n ? i : i + 1];
    auto local = lo < hi ? golden_section_maximize(objective, lo, hi, settings.refine_tol)
                         : ScalarMax{grid[i], values[i]};
    if (values[i] > local.value) local = {grid[i], values[i]};
    // Candidates arrive in ascending alpha, so a tie keeps the earlier one.
    const double scale = std::max(std::abs(local.value), std::abs(best_value));
    const bool tie = have_best && std::abs(local.value - best_value) <= settings.refine_tol * scale;
    if (!have_best || (!tie && local.value > best_value)) {
      best_alpha = local.x;
      best_value = local.value;
      have_best = true;
    }
  }
  return eval(best_alpha);
}

}  // namespace

void validate(const OptimizerSettings& s) {
  if (!(s.alpha_min >= 0.0)) throw ValidationError("alpha_min out of [0, inf)");
  if (!(s.alpha_step > 0.0)) throw ValidationError("alpha_step out of (0, inf)");
  if (!(s.alpha_max > s.alpha_min)) throw ValidationError("alpha_max must exceed alpha_min");
  if (!(s.refine_tol > 0.0)) throw ValidationError("refine_tol out of (0, inf)");
  if (s.nu_grid_points < 3) throw ValidationError("nu_grid_points must be at least 3");
}

double s_gamma(const Coefficients& c, double nu) {
  const double cn = std::cos(nu);
  const double sn = std::sin(nu);
  const double x = 2.0 * c.c1 * cn * sn;
  const double z = c.c2 * cn * cn - c.c3 * sn * sn;
  return 2.0 * std::sqrt(x * x + z * z);
}

double gamma_opt(const Coefficients& c, double nu) {
  const double cn = std::cos(nu);
  const double sn = std::sin(nu);
  const double x = 2.0 * c.c1 * cn * sn;
  const double z = c.c2 * cn * cn - c.c3 * sn * sn;
  if (x == 0.0 && z == 0.0) throw std::domain_error("gamma undefined; S=0");
  return std::atan2(x, z);
}

double s_at(const Coefficients& c, double nu, double gamma) {
  const double cn = std::cos(nu);
  const double sn = std::sin(nu);
  const double sx_b0 = 2.0 * c.c1 * cn * sn;
  const double sz_b1 = c.c2 * cn * cn - c.c3 * sn * sn;
  return 2.0 * std::cos(gamma) * sz_b1 + 2.0 * std::sin(gamma) * sx_b0;
}

Conditions conditions(const Coefficients& c) {
  const double sum = coefficient_sum(c);
  const double rhs = 2.0 * c.c1 * c.c1;
  return {c.c3 * sum < rhs, c.c2 * sum < rhs};
}

QuarticForm quartic_form(const Coefficients& c) {
  const double sum = coefficient_sum(c);
  const double c1sq = c.c1 * c.c1;
  return {sum * sum - 4.0 * c1sq, 4.0 * c1sq - 2.0 * c.c2 * sum};
}

ClosedFormMax s_max_closed(const Coefficients& c) {
  const auto [a, b] = quartic_form(c);
  if (a < 0.0) {
    const double ratio = b / (-2.0 * a);
    if (ratio > 0.0 && ratio < 1.0) {
      const double x = 2.0 * c.c1 * c.c1 - c.c2 * coefficient_sum(c);
      const double e = x * x / (-a) + c2_square_deficit(c);
      const auto [s, excess] = from_half_square_excess(e);
      return {s, excess, std::asin(std::sqrt(ratio)), true};
    }
  }
  const double d2 = abs_minus_one_c2(c);
  const double d3 = abs_minus_one_c3(c);
  if (d2 >= d3) return {2.0 + 2.0 * d2, 2.0 * d2, 0.0, false};
  return {2.0 + 2.0 * d3, 2.0 * d3, kHalfPi, false};
}

ChshResult s_max_over_alpha(const ChannelSpec& channel, const Scenario& scenario,
                            const OptimizerSettings& settings) {
  validate(channel);
  validate(settings);
  if (channel.eta_a < 1.0) {
    throw ValidationError("eta_a < 1 requires s_max_atomic");
  }
  if (scenario.kind == ScenarioKind::Photocount) {
    auto eval = [&](double alpha) {
      const double b = bin_for(alpha, channel.t_line);
      const auto coeffs =
          photocount_coefficients(alpha, channel, b, scenario.loss_convention, settings.quadrature);
      const auto m = s_max_closed(coeffs);
      return fill_result(coeffs, alpha, b, m.nu_opt, m.s, m.excess);
    };
    return maximize_over_alpha(eval, settings);
  }
  auto eval = [&](double alpha) {
    const double b = bin_for(alpha, channel.t_line);
    const auto coeffs = twohomodyne_coefficients(alpha, channel.t_line, b, settings.quadrature);
    // sin^2(2 nu) = 1 maximizes 2 sqrt(c1^2 sin^2 2nu + c2^2).
    const double e = coeffs.c1 * coeffs.c1 + c2_square_deficit(coeffs);
    const auto [s, excess] = from_half_square_excess(e);
    return fill_result(coeffs, alpha, b, std::numbers::pi / 4, s, excess);
  };
  return maximize_over_alpha(eval, settings);
}

double s_gamma_atomic(const Coefficients& c, double nu, double eta_a) {
  const double s2 = std::sin(2.0 * nu);
  return 2.0 * (eta_a * std::sqrt(c.c1 * c.c1 * s2 * s2 + c.c2 * c.c2) +
                (1.0 - eta_a) * c.c2 * std::cos(2.0 * nu));
}

double s_gamma_atomic_excess(const Coefficients& c, double nu, double eta_a) {
  const double s2 = std::sin(2.0 * nu);
  const double c2nu = std::cos(2.0 * nu);
  const double sn = std::sin(nu);
  const double radicand = c.c1 * c.c1 * s2 * s2 + c.c2 * c.c2;
  const double root_minus_one =
      (c.c1 * c.c1 * s2 * s2 + c2_square_deficit(c)) / (std::sqrt(radicand) + 1.0);
  // c2 cos(2nu) - 1 = -(1 - c2) cos(2nu) - 2 sin^2(nu)
  const double linear_minus_one = -c.one_minus_c2 * c2nu - 2.0 * sn * sn;
  return 2.0 * (eta_a * root_minus_one + (1.0 - eta_a) * linear_minus_one);
}

double atomic_stationarity_residual(const Coefficients& c, double nu, double eta_a) {
  const double s2 = std::sin(2.0 * nu);
  const double c2nu = std::cos(2.0 * nu);
  const double root = std::sqrt(c.c1 * c.c1 * s2 * s2 + c.c2 * c.c2);
  const double first = root > 0.0 ? eta_a * c.c1 * c.c1 * s2 * c2nu / root : 0.0;
  return first - (1.0 - eta_a) * c.c2 * s2;
}

AtomicNuMax maximize_atomic_nu(const Coefficients& c, double eta_a, int nu_grid_points) {
  const int n = std::max(nu_grid_points, 3);
  const double step = kHalfPi / (n - 1);
  auto objective = [&](double nu) { return s_gamma_atomic_excess(c, nu, eta_a); };
  int best = 0;
  double best_value = objective(0.0);
  for (int i = 1; i < n; ++i) {
    const double v = objective(i * step);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = std::max(0, best - 1) * step;
  const double hi = std::min(n - 1, best + 1) * step;
  auto refined = golden_section_maximize(objective, lo, hi, 1e-11);
  if (best_value > refined.value) refined = {best * step, best_value};
  // Values are flat to rounding near the top; polish on the sign of the derivative.
  auto rising = [&](double nu) { return atomic_stationarity_residual(c, nu, eta_a) > 0.0; };
  if (lo < refined.x && refined.x < hi && rising(lo) && !rising(hi)) {
    const auto root = bisect_predicate([&](double nu) { return !rising(nu); }, lo, hi, 1e-15);
    const double v = objective(root.mid());
    if (v >= refined.value - 1e-15) refined = {root.mid(), v};
  }
  for (double end : {0.0, kHalfPi}) {
    const double v = objective(end);
    if (std::abs(refined.x - end) < step && v >= refined.value - 1e-15) refined = {end, v};
  }

  AtomicNuMax out;
  out.nu_opt = refined.x;
  out.excess = refined.value;
  out.residual = atomic_stationarity_residual(c, out.nu_opt, eta_a);
  out.boundary = out.nu_opt <= 1e-9 || out.nu_opt >= kHalfPi - 1e-9;
  if (!out.boundary && std::abs(out.residual) > kStationarityTol) {
    throw std::logic_error("atomic nu optimum is not stationary: residual " +
                           std::to_string(out.residual));
  }
  return out;
}

ChshResult s_max_atomic(const ChannelSpec& channel, const OptimizerSettings& settings) {
  validate(channel);
  validate(settings);
  auto eval = [&](double alpha) {
    const double b = bin_for(alpha, channel.t_line);
    const auto coeffs = twohomodyne_coefficients(alpha, channel.t_line, b, settings.quadrature);
    const auto m = maximize_atomic_nu(coeffs, channel.eta_a, settings.nu_grid_points);
    return fill_result(coeffs, alpha, b, m.nu_opt, 2.0 + m.excess, m.excess);
  };
  return maximize_over_alpha(eval, settings);
}

ChshResult optimize(const ChannelSpec& channel, const Scenario& scenario,
                    const OptimizerSettings& settings) {
  if (channel.eta_a < 1.0) {
    if (scenario.kind != ScenarioKind::TwoHomodyne) {
      throw ValidationError("eta_a < 1 is modeled for the two-homodyne scenario only");
    }
    return s_max_atomic(channel, settings);
  }
  return s_max_over_alpha(channel, scenario, settings);
}

double asymptotic_condition_margin(double eta, double alpha_mag) {
  return std::sqrt(2.0 / std::numbers::pi) * 2.0 / alpha_mag -
         std::exp(-eta * alpha_mag * alpha_mag / 4.0);
}

std::optional<double> asymptotic_crossover(double eta) {
  if (!(eta > 0.0)) throw ValidationError("eta out of (0,1]");
  // Sign of the margin equals the sign of q(alpha) = ln(c/alpha) + eta alpha^2/4,
  // which is convex in ln(alpha) with its minimum at sqrt(2/eta).
  const double c = 2.0 * std::sqrt(2.0 / std::numbers::pi);
  auto q = [&](double a) { return std::log(c / a) + eta * a * a / 4.0; };
  double lo = std::sqrt(2.0 / eta);
  if (q(lo) >= 0.0) return std::nullopt;
  double hi = 2.0 * lo;
  while (q(hi) < 0.0) hi *= 2.0;
  const auto br = bisect_predicate([&](double a) { return q(a) > 0.0; }, lo, hi, 1e-12 * hi);
  return br.hi;
}

Theorem1Witness theorem1_witness(double eta, double alpha_search_max, LossConvention convention,
                                 const OptimizerSettings& settings) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ValidationError("eta out of (0,1]");
  const ChannelSpec channel{1.0, eta, 1.0};
  auto eval = [&](double alpha) {
    const double b = optimal_bin(alpha, 1.0);
    const auto coeffs = photocount_coefficients(alpha, channel, b, convention, settings.quadrature);
    return s_max_closed(coeffs);
  };
  auto violates = [&](double alpha) { return eval(alpha).excess > settings.violation_margin; };

  Theorem1Witness w;
  w.asymptotic_alpha = asymptotic_crossover(eta);

  std::vector<double> grid;
  for (double a = 0.05; a <= alpha_search_max; a *= 1.01) grid.push_back(a);
  std::size_t first = grid.size();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (violates(grid[i])) {
      first = i;
      break;
    }
  }
  if (first == grid.size()) return w;

  std::size_t last = first;
  std::size_t best = first;
  double best_excess = eval(grid[first]).excess;
  while (last + 1 < grid.size()) {
    const double e = eval(grid[last + 1]).excess;
    if (!(e > settings.violation_margin)) break;
    ++last;
    if (e > best_excess) {
      best_excess = e;
      best = last;
    }
  }
  const double lo = grid[best > first ? best - 1 : first];
  const double hi = grid[best < last ? best + 1 : last];
  auto objective = [&](double a) { return eval(a).excess; };
  auto refined = lo < hi ? golden_section_maximize(objective, lo, hi, settings.refine_tol * hi)
                         : ScalarMax{grid[best], best_excess};

  const auto m = eval(refined.x);
  w.found = true;
  w.alpha = refined.x;
  w.s = m.s;
  w.excess = m.excess;
  w.onset_alpha = first == 0 ? grid[0]
                             : bisect_predicate(violates, grid[first - 1], grid[first],
                                                settings.refine_tol * grid[first])
                                   .hi;
  w.asymptotic_condition_holds = asymptotic_condition_margin(eta, w.alpha) > 0.0;
  return w;
}

ThresholdResult violation_threshold(const Scenario& scenario, FreeParam param,
                                    const ChannelSpec& fixed, const OptimizerSettings& settings,
                                    double tol) {
  validate(fixed);
  if (param == FreeParam::EtaA && scenario.kind != ScenarioKind::TwoHomodyne) {
    throw ValidationError("eta_a threshold is defined for the two-homodyne scenario only");
  }
  auto at = [&](double v) {
    ChannelSpec ch = fixed;
    (param == FreeParam::TLine ? ch.t_line : ch.eta_a) = v;
    return optimize(ch, scenario, settings);
  };
  auto holds = [&](double v) { return is_violation(at(v), settings); };
  if (!holds(1.0) || holds(0.0)) throw std::runtime_error("no threshold in range");
  const auto br = bisect_predicate(holds, 0.0, 1.0, tol);
  ThresholdResult out;
  out.lo = br.lo;
  out.hi = br.hi;
  out.value = br.mid();
  const auto below = at(br.lo);
  const auto above = at(br.hi);
  out.s_lo = below.s_value;
  out.s_hi = above.s_value;
  out.excess_lo = below.excess;
  out.excess_hi = above.excess;
  return out;
}

}  // namespace hybridbell
