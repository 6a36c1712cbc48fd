#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "hybridbell/coefficients.hpp"
#include "hybridbell/fock_oracle.hpp"
#include "hybridbell/quadrature.hpp"
#include "hybridbell/search.hpp"

using namespace hybridbell;
using doctest::Approx;

TEST_CASE("adaptive quadrature") {
  const auto r = integrate([](double x) { return std::exp(-x * x); }, -3.0, 3.0, {}, 1);
  CHECK(r.value == Approx(std::sqrt(std::numbers::pi) * std::erf(3.0)).epsilon(1e-14));
  CHECK(r.error_estimate <= 1e-10 * std::abs(r.value));

  QuadratureSettings tight{1e-30, 1e-30, 3};
  CHECK_THROWS_AS(integrate([](double x) { return std::cos(200.0 * x); }, 0.0, 10.0, tight, 1),
                  QuadratureError);
}

TEST_CASE("visibility") {
  CHECK(visibility(3.7, 1.0) == 1.0);
  CHECK(visibility(0.0, 0.3) == 1.0);
  CHECK(visibility(2.0, 0.5) == Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("c1 reference values") {
  CHECK(c1(0.0, 1.0, 1.0) == Approx(0.6854015858994297).epsilon(1e-12));
  CHECK(c1(2.1, 1.0, optimal_bin(2.1, 1.0)) == Approx(0.6115973006597782).epsilon(1e-11));
  CHECK(c1(3.0, 0.7, 0.4) == Approx(0.14625596652098813).epsilon(1e-11));
  CHECK(c1(1.5, 0.8, 50.0) == Approx(0.32465246735834975).epsilon(1e-11));
  CHECK(c1(50.0, 1.0, optimal_bin(50.0, 1.0)) == Approx(0.0319123992810265).epsilon(1e-10));
}

TEST_CASE("c1 wide-bin limit and full line") {
  for (double t : {0.3, 0.8, 1.0}) {
    for (double a : {0.5, 1.5, 3.0}) {
      const double limit = visibility(a, t) * std::exp(-t * a * a / 2);
      CHECK(c1(a, t, 50.0) == Approx(limit).epsilon(1e-10));
      CHECK(c1(a, t, std::numeric_limits<double>::infinity()) == Approx(limit).epsilon(1e-10));
    }
  }
}

TEST_CASE("c1 large-amplitude asymptote") {
  for (double a : {20.0, 50.0, 100.0}) {
    const double asym = std::sqrt(2.0 / std::numbers::pi) * 2.0 / a;
    CHECK(std::abs(c1(a, 1.0, optimal_bin(a, 1.0)) - asym) / asym < 1e-3);
  }
}

TEST_CASE("narrow-bin limit") {
  // The bin observable tends to -1, so c1 -> -V <beta|0>.
  for (double t : {0.5, 1.0}) {
    const double limit = -visibility(1.3, t) * std::exp(-t * 1.69 / 2);
    CHECK(std::abs(c1(1.3, t, 1e-7) - limit) < 1e-6);
  }
}

TEST_CASE("photocount c2 and c3") {
  static_assert(c2_photocount() == 1.0);
  for (auto conv : {LossConvention::PaperFaithful, LossConvention::BornRule}) {
    CHECK(c3_photocount(0.0, 0.4, 0.3, conv) == 1.0);
  }
  const double expected = 2.0 * std::exp(-2.0) - 1.0;
  CHECK(c3_photocount(2.0, 1.0, 1.0, LossConvention::PaperFaithful) == Approx(expected).epsilon(1e-15));
  CHECK(c3_photocount(2.0, 1.0, 0.5, LossConvention::BornRule) == Approx(-0.7293294335267746).epsilon(1e-15));
  CHECK(c3_photocount_gap(20.0, 1.0, 1.0, LossConvention::BornRule) == Approx(2 * std::exp(-400.0)));
  CHECK(c3_photocount_gap(2.0, 1.0, 0.5, LossConvention::BornRule) == Approx(2.0 * std::exp(-2.0)));

  const auto oracle = oracle::photocount_coefficients(2.0, 1.0, 0.5, 1.0);
  CHECK(oracle.c3 == Approx(expected).epsilon(1e-9));
  CHECK(oracle.c2 == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("c3 bounded and monotone in eta T alpha^2") {
  for (auto conv : {LossConvention::PaperFaithful, LossConvention::BornRule}) {
    double prev = 2.0;
    for (double a = 0.0; a <= 6.0; a += 0.1) {
      const double c3 = c3_photocount(a, 0.9, 0.7, conv);
      CHECK(std::abs(c3) <= 1.0);
      CHECK(c3 <= prev);
      prev = c3;
    }
  }
}

TEST_CASE("two-homodyne c2") {
  CHECK(c2_twohomodyne(0.0, 0.6) == 0.0);
  CHECK(c2_twohomodyne(3.0, 1.0) == Approx(0.9973002039367398).epsilon(1e-14));
  CHECK(c2_twohomodyne(2.0, 0.5) == Approx(0.8427007929497149).epsilon(1e-14));
  CHECK(twohomodyne_p_threshold(2.0, 0.5) == Approx(1.0));
  double prev = -1.0;
  for (double a = 0.0; a < 5.0; a += 0.25) {
    const double v = c2_twohomodyne(a, 0.7);
    CHECK(v >= prev);
    CHECK(v < 1.0);
    CHECK(c2_twohomodyne(a, 0.8) >= v);
    prev = v;
  }
  const auto co = twohomodyne_coefficients(5.0, 1.0, 0.3);
  CHECK(co.c3 == -co.c2);
  CHECK(co.one_minus_c2 == Approx(std::erfc(5.0 / std::sqrt(2.0))).epsilon(1e-14));
  CHECK(co.one_minus_c2 == co.one_plus_c3);
}

TEST_CASE("optimal bin") {
  CHECK(optimal_bin(1.0, 1.0) == Approx(1.1107207345395916).epsilon(1e-15));
  CHECK(optimal_bin(2.0, 1.0) == Approx(0.5553603672697958).epsilon(1e-15));
  CHECK_THROWS_AS(optimal_bin(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(optimal_bin(2.0, 0.0), ValidationError);

  for (double t : {1.0, 0.6}) {
    const auto best = golden_section_maximize([&](double b) { return c1(2.1, t, b); }, 0.05, 2.0, 1e-9);
    CHECK(std::abs(best.x - optimal_bin(2.1, t)) < 1e-4);
  }
}

TEST_CASE("optimal bin is a local maximum over a grid") {
  for (double a = 0.5; a <= 6.0; a += 0.5) {
    for (double t = 0.3; t <= 1.0 + 1e-12; t += 0.1) {
      const double b = optimal_bin(a, t);
      const double centre = c1(a, t, b);
      CHECK(c1(a, t, 1.01 * b) < centre);
      CHECK(c1(a, t, 0.99 * b) < centre);
    }
  }
}

TEST_CASE("coefficient sets agree with the Fock oracle") {
  for (double a : {0.4, 1.3, 2.1, 3.5}) {
    for (double t : {0.55, 1.0}) {
      const double b = optimal_bin(a, t);
      const auto pc = photocount_coefficients(a, {t, 0.8, 1.0}, b, LossConvention::BornRule);
      const auto opc = oracle::photocount_coefficients(a, t, 0.8, b);
      CHECK(pc.c1 == Approx(opc.c1).epsilon(1e-8));
      CHECK(std::abs(pc.c3 - opc.c3) < 1e-8);
      const auto th = twohomodyne_coefficients(a, t, b);
      const auto oth = oracle::twohomodyne_coefficients(a, t, b, twohomodyne_p_threshold(a, t));
      CHECK(std::abs(th.c1 - oth.c1) < 1e-8);
      CHECK(std::abs(th.c2 - oth.c2) < 1e-8);
      CHECK(std::abs(th.c3 - oth.c3) < 1e-8);
    }
  }
}
