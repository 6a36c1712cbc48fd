#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hybridbell/chsh.hpp"
#include "hybridbell/coefficients.hpp"
#include "hybridbell/fock_oracle.hpp"

using namespace hybridbell;
using namespace hybridbell::oracle;
using doctest::Approx;

TEST_CASE("coherent states") {
  const auto vac = coherent_fock({0.0, 0.0}, 10);
  CHECK(std::abs(vac.amplitudes[0] - cplx(1.0, 0.0)) == 0.0);
  CHECK(vac.amplitudes.tail(10).norm() == 0.0);

  const auto c = coherent_fock({0.0, 2.0}, truncation_for(2.0));
  CHECK(std::norm(c.amplitudes[0]) == Approx(std::exp(-4.0)).epsilon(1e-14));
  CHECK(1.0 - c.norm_squared() <= 1e-10);
  CHECK(std::abs(inner(vac, c)) == Approx(std::exp(-2.0)).epsilon(1e-14));

  CHECK(truncation_for(0.0) == 20);
  CHECK(truncation_for(2.0) == 44);
  try {
    coherent_fock({0.0, 5.0}, 10);
    FAIL("expected TruncationError");
  } catch (const TruncationError& e) {
    CHECK(e.required_n_max() > 10);
  }
}

TEST_CASE("hermite functions") {
  std::vector<double> psi;
  hermite_functions(0.7, 3, psi);
  const double g = std::pow(std::numbers::pi, -0.25) * std::exp(-0.245);
  CHECK(psi[0] == Approx(g));
  CHECK(psi[1] == Approx(std::sqrt(2.0) * 0.7 * g));
  CHECK(psi[2] == Approx((2 * 0.49 - 1) / std::sqrt(2.0) * g));
  const auto full = hermite_overlap(-40.0, 40.0, 12);
  CHECK((full - Eigen::MatrixXd::Identity(13, 13)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("x bin operator") {
  const auto op = x_bin_operator(1.0, 30);
  CHECK(op.hermitian);
  CHECK(op.hermiticity_defect() <= 1e-12);
  CHECK(op.matrix(0, 0).real() == Approx(0.6854015858994297).epsilon(1e-12));
  for (int m = 0; m < 31; ++m) {
    for (int n = 0; n < 31; ++n) {
      if ((m + n) % 2) CHECK(std::abs(op.matrix(m, n)) <= 1e-15);
    }
  }
  const auto spec = op.spectrum();
  CHECK(spec.minCoeff() >= -1.0 - 1e-8);
  CHECK(spec.maxCoeff() <= 1.0 + 1e-8);

  const auto wide = x_bin_operator(1e3, 20);
  CHECK((wide.matrix - Eigen::MatrixXcd::Identity(21, 21)).cwiseAbs().maxCoeff() < 1e-12);

  // P = (op + 1)/2 is a projector up to a truncation tail that shrinks with n_max.
  auto defect = [](double b, int n_max, int block) {
    const auto op = x_bin_operator(b, n_max);
    const Eigen::MatrixXcd p = (op.matrix + Eigen::MatrixXcd::Identity(n_max + 1, n_max + 1)) / 2.0;
    return (p * p - p).topLeftCorner(block, block).cwiseAbs().maxCoeff();
  };
  CHECK(defect(5.0, truncation_for(3.5), 6) <= 1e-6);
  double prev = 1.0;
  for (int n : {20, 40, 80, 160}) {
    const double d = defect(3.0, n, 11);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("p threshold operator") {
  CHECK(std::abs(p_threshold_operator(0.0, 10).matrix(0, 0)) < 1e-14);
  const auto inf = p_threshold_operator(1e3, 12);
  CHECK((inf.matrix - Eigen::MatrixXcd::Identity(13, 13)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(p_threshold_operator(0.4, 12).hermiticity_defect() <= 1e-12);

  const double a = 2.0, t = 0.5;
  const auto op = p_threshold_operator(twohomodyne_p_threshold(a, t), truncation_for(a));
  CHECK(op.matrix(0, 0).real() == Approx(c2_twohomodyne(a, t)).epsilon(1e-8));

  // Direct momentum-space value for |i beta>: P(p < th) = (1 + erf(th - sqrt2 beta)) / 2.
  const double beta = 1.3, th = 0.9;
  const auto v = coherent_fock({0.0, beta}, truncation_for(beta));
  const auto op2 = p_threshold_operator(th, v.n_max());
  const double direct = std::erf(th - std::sqrt(2.0) * beta);
  CHECK((v.amplitudes.adjoint() * op2.matrix * v.amplitudes)(0).real() == Approx(direct).epsilon(1e-8));
}

TEST_CASE("no-click operator") {
  const auto ideal = noclick_operator(1.0, 5);
  CHECK(ideal.matrix(0, 0).real() == 1.0);
  CHECK(ideal.matrix(3, 3).real() == -1.0);
  CHECK((noclick_operator(0.0, 5).matrix - Eigen::MatrixXcd::Identity(6, 6)).norm() == 0.0);

  const double eta = 0.4, beta = 1.7;
  const auto v = coherent_fock({0.0, beta}, truncation_for(beta));
  const auto op = noclick_operator(eta, v.n_max());
  CHECK((v.amplitudes.adjoint() * op.matrix * v.amplitudes)(0).real() ==
        Approx(2 * std::exp(-eta * beta * beta) - 1).epsilon(1e-10));
}

TEST_CASE("lossy hybrid state") {
  const auto lossless = lossy_hybrid_state({0.6, 2.0}, 1.0);
  CHECK(lossless.decoherence_v == Approx(1.0));
  const auto lossy = lossy_hybrid_state({0.6, 2.0}, 0.5);
  CHECK(lossy.decoherence_v == Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(lossy.decoherence_v == Approx(visibility(2.0, 0.5)).epsilon(1e-12));
  CHECK(lossy.branch_s.norm_squared() + lossy.branch_g.norm_squared() == Approx(1.0).epsilon(1e-10));
  CHECK(lossy_hybrid_state({0.0, 2.0}, 0.7).branch_g.norm_squared() == 0.0);

  const auto rank2 = hybrid_density(lossy_hybrid_state({0.9, 0.8}, 0.6, 20));
  const auto two_mode = lossy_hybrid_density_two_mode({0.9, 0.8}, 0.6, 20);
  CHECK((rank2 - two_mode).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(rank2.trace().real() == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("CHSH expectation") {
  const int n = truncation_for(2.0);
  const auto b0 = x_bin_operator(0.5, n);
  const auto b1 = noclick_operator(1.0, n);
  const auto product = lossy_hybrid_state({0.0, 2.0}, 1.0, n);
  for (double g = 0.0; g < 6.3; g += 0.3) CHECK(std::abs(chsh_expectation(product, g, b0, b1)) <= 2 + 1e-8);

  const double a = 2.1;
  const ChshResult r = s_max_over_alpha({}, {ScenarioKind::Photocount, LossConvention::BornRule});
  const int nn = truncation_for(r.alpha_opt);
  const auto state = lossy_hybrid_state({r.nu_opt, r.alpha_opt}, 1.0, nn);
  const double s = chsh_expectation(state, r.gamma_opt, x_bin_operator(r.b_opt, nn), noclick_operator(1.0, nn));
  CHECK(std::abs(s - r.s_value) <= 1e-6);
  CHECK(std::abs(r.alpha_opt - a) < 0.1);

  CHECK(oracle::photocount_coefficients(1.0, 1.0, 0.3, 0.7).c2 == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("truncation doubling") {
  const double a = 3.0, t = 0.8, b = optimal_bin(a, t);
  const int n = truncation_for(a);
  const auto lo = oracle::twohomodyne_coefficients(a, t, b, twohomodyne_p_threshold(a, t), n);
  const auto hi = oracle::twohomodyne_coefficients(a, t, b, twohomodyne_p_threshold(a, t), 2 * n);
  CHECK(std::abs(lo.c1 - hi.c1) <= 1e-8);
  CHECK(std::abs(lo.c2 - hi.c2) <= 1e-8);
  CHECK(std::abs(lo.c3 - hi.c3) <= 1e-8);
}
