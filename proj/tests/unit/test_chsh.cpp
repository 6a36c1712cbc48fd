#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hybridbell/chsh.hpp"
#include "hybridbell/coefficients.hpp"
#include "hybridbell/verify.hpp"

using namespace hybridbell;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

OptimizerSettings coarse() {
  OptimizerSettings s;
  s.alpha_step = 0.1;
  s.nu_grid_points = 401;
  return s;
}

}  // namespace

TEST_CASE("s_gamma on idealized coefficients") {
  CHECK(s_gamma(Coefficients::from(0.0, 1.0, 1.0), kPi / 4) == Approx(0.0));
  CHECK(s_gamma(Coefficients::from(1.0, 1.0, -1.0), kPi / 4) == Approx(kTsirelson));
}

TEST_CASE("gamma_opt alignment") {
  // nu = 0: <sz B1> = c2, <sx B0> = 0
  CHECK(gamma_opt(Coefficients::from(0.4, 1.0, 0.0), 0.0) == Approx(0.0));
  // c2 cos^2 - c3 sin^2 = 0 at nu = pi/4 with c3 = c2
  CHECK(gamma_opt(Coefficients::from(0.4, 0.5, 0.5), kPi / 4) == Approx(kPi / 2));
  CHECK_THROWS_AS(gamma_opt(Coefficients::from(0.7, 0.0, 1.0), 0.0), std::domain_error);

  const auto co = photocount_coefficients(2.1, {}, optimal_bin(2.1, 1.0), LossConvention::BornRule);
  const auto m = s_max_closed(co);
  const double g = gamma_opt(co, m.nu_opt);
  CHECK(std::abs(s_at(co, m.nu_opt, g) - s_gamma(co, m.nu_opt)) < 1e-12);
  CHECK(std::abs(s_gamma(co, m.nu_opt) - m.s) < 1e-12);
}

TEST_CASE("conditions") {
  auto c = conditions(Coefficients::from(1.0, 1.0, -1.0));
  CHECK(c.c1_ok);
  CHECK(c.c2_ok);
  c = conditions(Coefficients::from(0.0, 1.0, 1.0));
  CHECK_FALSE(c.c1_ok);
  CHECK_FALSE(c.c2_ok);

  verify::UniformSource rng(7);
  for (int i = 0; i < 2000; ++i) {
    const auto co = Coefficients::from(rng.next(-1, 1), 1.0, rng.next(-1, 1));
    const auto cc = conditions(co);
    if (cc.c2_ok) CHECK(cc.c1_ok);
  }
}

TEST_CASE("closed-form maximum") {
  auto m = s_max_closed(Coefficients::from(1.0, 1.0, -1.0));
  CHECK(m.s == Approx(kTsirelson));
  CHECK(m.nu_opt == Approx(kPi / 4));
  CHECK(m.interior);

  m = s_max_closed(Coefficients::from(0.0, 1.0, 1.0));
  CHECK(m.s == Approx(2.0));
  CHECK(m.nu_opt == Approx(0.0));
  CHECK(m.excess == 0.0);
  CHECK_FALSE(m.interior);

  const auto co = photocount_coefficients(2.1, {}, optimal_bin(2.1, 1.0), LossConvention::BornRule);
  CHECK(s_max_closed(co).s == Approx(2.324).epsilon(0.005 / 2.324));
}

TEST_CASE("quartic identity, stationarity and dominance") {
  verify::UniformSource rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto co = Coefficients::from(rng.next(-1, 1), rng.next(-1, 1), rng.next(-1, 1));
    const auto q = quartic_form(co);
    const auto m = s_max_closed(co);
    if (m.interior) {
      const double s2 = std::pow(std::sin(m.nu_opt), 2);
      CHECK(std::abs((2 * q.a * s2 + q.b) * std::sin(m.nu_opt)) <= 1e-10);
    }
    for (int k = 0; k < 50; ++k) {
      const double nu = rng.next(0, kPi / 2);
      const double s2 = std::pow(std::sin(nu), 2);
      const double f = q.a * s2 * s2 + q.b * s2 + co.c2 * co.c2;
      CHECK(std::abs(s_gamma(co, nu) - 2 * std::sqrt(std::max(f, 0.0))) <= 1e-12);
      CHECK(s_gamma(co, nu) <= m.s + 1e-12);
    }
    if (m.s > 2.0) {
      const auto cc = conditions(co);
      CHECK(cc.c1_ok);
      CHECK(cc.c2_ok);
    }
  }
}

TEST_CASE("photocount optimum") {
  const auto r = s_max_over_alpha({}, {ScenarioKind::Photocount, LossConvention::BornRule});
  CHECK(r.s_value == Approx(2.324).epsilon(0.005 / 2.324));
  CHECK(std::abs(r.alpha_opt - 2.1) < 0.1);
  CHECK(r.c1_ok);
  CHECK(r.c2_ok);
  CHECK(r.s_value <= kTsirelson + 1e-9);

  const auto paper = s_max_over_alpha({}, {ScenarioKind::Photocount, LossConvention::PaperFaithful});
  CHECK(paper.s_value == Approx(2.236).epsilon(0.001));
}

TEST_CASE("two-homodyne optimum") {
  const auto r = s_max_over_alpha({}, {ScenarioKind::TwoHomodyne});
  CHECK(r.s_value == Approx(2.29).epsilon(0.005 / 2.29));
  CHECK(r.nu_opt == Approx(kPi / 4));
  const auto t75 = s_max_over_alpha({0.75, 1.0, 1.0}, {ScenarioKind::TwoHomodyne});
  CHECK(t75.alpha_opt >= 2.2);
  CHECK(t75.alpha_opt <= 3.0);
  CHECK(is_violation(t75));
  CHECK_FALSE(is_violation(s_max_over_alpha({0.6, 1.0, 1.0}, {ScenarioKind::TwoHomodyne})));
}

TEST_CASE("atomic inefficiency") {
  const auto co = twohomodyne_coefficients(2.3, 1.0, optimal_bin(2.3, 1.0));
  for (double nu : {0.0, 0.3, 0.9}) {
    CHECK(s_gamma_atomic(co, nu, 1.0) ==
          Approx(2 * std::sqrt(std::pow(co.c1 * std::sin(2 * nu), 2) + co.c2 * co.c2)));
  }
  CHECK(s_gamma_atomic(co, 0.0, 0.0) == Approx(2 * co.c2));

  // Closed form of the stationary point in x = cos 2nu.
  for (double eta_a : {0.6, 0.8, 0.95}) {
    const double c1 = co.c1, c2 = co.c2, e = eta_a;
    const double x2 = (1 - e) * (1 - e) * c2 * c2 * (c1 * c1 + c2 * c2) /
                      (c1 * c1 * (e * e * c1 * c1 + (1 - e) * (1 - e) * c2 * c2));
    const auto m = maximize_atomic_nu(co, eta_a, 2001);
    if (x2 < 1.0) {
      CHECK_FALSE(m.boundary);
      CHECK(std::cos(2 * m.nu_opt) == Approx(std::sqrt(x2)).epsilon(1e-7));
      CHECK(std::abs(m.residual) <= 1e-10);
    }
  }

  for (double a = 0.5; a < 6.0; a += 0.37) {
    const auto c = twohomodyne_coefficients(a, 1.0, optimal_bin(a, 1.0));
    for (double e : {0.3, 0.6, 0.8, 0.9, 0.97}) {
      const auto m = maximize_atomic_nu(c, e, 2001);
      if (!m.boundary) CHECK(std::abs(m.residual) <= 1e-10);
      CHECK(m.excess >= s_gamma_atomic_excess(c, 0.0, e));
    }
  }

  const auto full = s_max_atomic({}, coarse());
  CHECK(full.s_value == Approx(2.29).epsilon(0.005 / 2.29));
  const auto edge = s_max_atomic({1.0, 1.0, 0.817}, coarse());
  CHECK(std::abs(edge.s_value - 2.0) < 1e-3);
  CHECK_FALSE(is_violation(s_max_atomic({1.0, 1.0, 0.5}, coarse())));
  CHECK_THROWS_AS(s_max_over_alpha({1.0, 1.0, 0.9}, {ScenarioKind::TwoHomodyne}), ValidationError);
}

TEST_CASE("monotone in transmission") {
  const auto s = coarse();
  double prev = 0.0;
  for (double t = 0.5; t <= 1.0 + 1e-12; t += 0.1) {
    const double v = s_max_over_alpha({t, 1.0, 1.0}, {ScenarioKind::Photocount}, s).s_value;
    CHECK(v >= prev - 1e-8);
    prev = v;
  }
}

TEST_CASE("theorem 1 witnesses") {
  const auto w1 = theorem1_witness(1.0, 50.0);
  REQUIRE(w1.found);
  CHECK(w1.s > 2.0);
  const auto w = theorem1_witness(0.01, 500.0);
  REQUIRE(w.found);
  CHECK(w.excess > 0.0);
  CHECK(w.asymptotic_condition_holds);
  CHECK(std::exp(-0.01 * w.alpha * w.alpha / 4) < std::sqrt(2 / kPi) * 2 / w.alpha);

  const auto co = photocount_coefficients(0.01, {}, optimal_bin(0.01, 1.0), LossConvention::PaperFaithful);
  CHECK(s_max_closed(co).s <= 2.0 + 1e-6);

  CHECK(asymptotic_condition_margin(1.0, 1.0) > 0.0);
  CHECK_FALSE(asymptotic_crossover(1.0).has_value());
  const auto cross = asymptotic_crossover(0.01);
  REQUIRE(cross.has_value());
  CHECK(std::abs(asymptotic_condition_margin(0.01, *cross)) < 1e-9);
}

TEST_CASE("violation thresholds") {
  const auto pc = violation_threshold({ScenarioKind::Photocount}, FreeParam::TLine, {});
  CHECK(pc.value == Approx(0.522).epsilon(0.005 / 0.522));
  CHECK(pc.excess_lo <= kViolationMargin);
  CHECK(pc.excess_hi > kViolationMargin);
  const auto th = violation_threshold({ScenarioKind::TwoHomodyne}, FreeParam::TLine, {});
  CHECK(std::abs(th.value - 0.678) <= 0.003);
  CHECK_THROWS_AS(violation_threshold({ScenarioKind::Photocount}, FreeParam::TLine, {1.0, 0.0, 1.0}),
                  std::runtime_error);
}
