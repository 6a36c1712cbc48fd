#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace hybridbell {

struct QuadratureSettings {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 200;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_error_(achieved) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule; nodes in descending
// order, the last one is the centre. Gauss nodes are the odd-indexed entries.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
///
/// The interval is first cut into `initial_panels` equal pieces; afterwards
/// the segment with the largest error estimate is bisected until the summed
/// estimate meets max(abs_tol, rel_tol*|I|). Throws QuadratureError carrying
/// the achieved estimate when max_subdivisions is exhausted.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, const QuadratureSettings& settings = {},
                           int initial_panels = 1) {
  if (a == b) return {};
  if (!(settings.abs_tol > 0.0) || !(settings.rel_tol > 0.0) || settings.max_subdivisions < 1) {
    throw std::invalid_argument("quadrature tolerances must be positive");
  }
  initial_panels = std::clamp(initial_panels, 1, settings.max_subdivisions);

  std::priority_queue<detail::Segment> work;
  double total = 0.0;
  double error = 0.0;
  const double width = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == initial_panels) ? b : lo + width;
    auto seg = detail::gauss_kronrod_15(f, lo, hi);
    total += seg.value;
    error += seg.error;
    work.push(seg);
  }

  int subdivisions = initial_panels;
  auto converged = [&] {
    return error <= std::max(settings.abs_tol, settings.rel_tol * std::abs(total));
  };
  while (!converged()) {
    if (subdivisions >= settings.max_subdivisions) {
      throw QuadratureError("quadrature did not converge: error estimate " +
                                std::to_string(error) + " after " +
                                std::to_string(subdivisions) + " subdivisions",
                            error);
    }
    const auto worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    ++subdivisions;
  }

  // Re-sum to shed the drift of the running updates.
  total = 0.0;
  error = 0.0;
  while (!work.empty()) {
    total += work.top().value;
    error += work.top().error;
    work.pop();
  }
  return {total, error, subdivisions};
}

}  // namespace hybridbell
