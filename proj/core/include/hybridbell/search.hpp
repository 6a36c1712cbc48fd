#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace hybridbell {

struct ScalarMax {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for a maximum of a unimodal f on [lo, hi]; stops
/// once the bracket is narrower than tol. The better of the final interior
/// point and the two bracket ends is returned, so a monotone f yields its
/// endpoint.
template <class F>
ScalarMax golden_section_maximize(F&& f, double lo, double hi, double tol) {
  if (hi < lo) throw std::invalid_argument("golden_section_maximize: empty bracket");
  constexpr double inv_phi = 1.0 / std::numbers::phi;
  double a = lo;
  double b = hi;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_phi;
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_phi;
      fd = f(d);
    }
  }
  ScalarMax best = fc >= fd ? ScalarMax{c, fc} : ScalarMax{d, fd};
  for (double end : {lo, hi}) {
    const double fe = f(end);
    if (fe > best.value) best = {end, fe};
  }
  return best;
}

/// Bisection for the switch point of a predicate that is false at lo and
/// true at hi. Returns the final bracket.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
  double mid() const { return 0.5 * (lo + hi); }
};

template <class Pred>
Bracket bisect_predicate(Pred&& holds, double lo, double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (holds(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return {lo, hi};
}

}  // namespace hybridbell
