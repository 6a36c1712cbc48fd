#include "hybridbell/fock_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

namespace hybridbell::oracle {
namespace {

constexpr double kNormDeficitBound = 1e-10;
constexpr double kPanelWidth = 0.25;
constexpr double kOverlapTol = 1e-13;
constexpr int kMaxPanelHalvings = 4;

using Legendre = boost::math::quadrature::gauss<double, 20>;

// Beyond the classical turning point sqrt(2n+1) every psi_k, k <= n, has
// decayed below double resolution within this margin.
double support_edge(int n_max) { return std::sqrt(2.0 * n_max + 1.0) + 12.0; }

Eigen::MatrixXd composite_overlap(double lo, double hi, int n_max, int panels) {
  const auto& nodes = Legendre::abscissa();
  const auto& weights = Legendre::weights();
  const int dim = n_max + 1;
  const int per_panel = 2 * static_cast<int>(nodes.size());
  Eigen::MatrixXd psi(static_cast<Eigen::Index>(panels) * per_panel, dim);
  Eigen::VectorXd w(psi.rows());
  std::vector<double> row;
  const double h = (hi - lo) / panels;
  Eigen::Index r = 0;
  for (int p = 0; p < panels; ++p) {
    const double centre = lo + (p + 0.5) * h;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      for (double sign : {-1.0, 1.0}) {
        hermite_functions(centre + sign * 0.5 * h * nodes[j], n_max, row);
        psi.row(r) = Eigen::Map<const Eigen::RowVectorXd>(row.data(), dim);
        w(r) = 0.5 * h * weights[j];
        ++r;
      }
    }
  }
  return psi.transpose() * w.asDiagonal() * psi;
}

FockOperator from_projector(const Eigen::MatrixXcd& projector) {
  const auto dim = projector.rows();
  FockOperator op;
  op.matrix = 2.0 * projector - Eigen::MatrixXcd::Identity(dim, dim);
  op.hermitian = true;
  return op;
}

}  // namespace

double FockOperator::hermiticity_defect() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd FockOperator::spectrum() const {
  if (!hermitian) throw std::logic_error("spectrum requires a hermitian operator");
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(matrix, Eigen::EigenvaluesOnly).eigenvalues();
}

int truncation_for(double max_alpha_mag) {
  const double a = std::abs(max_alpha_mag);
  return static_cast<int>(std::ceil(a * a + 10.0 * a + 20.0));
}

FockVector coherent_fock(cplx alpha, int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  FockVector v;
  v.amplitudes.resize(n_max + 1);
  v.amplitudes(0) = std::exp(-std::norm(alpha) / 2.0);
  for (int n = 1; n <= n_max; ++n) {
    v.amplitudes(n) = v.amplitudes(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  }
  const double deficit = 1.0 - v.norm_squared();
  if (deficit > kNormDeficitBound) {
    // Grow until the Poisson tail fits.
    int required = n_max;
    double tail_amp = std::abs(v.amplitudes(n_max));
    double covered = v.norm_squared();
    while (1.0 - covered > kNormDeficitBound) {
      ++required;
      tail_amp *= std::abs(alpha) / std::sqrt(static_cast<double>(required));
      covered += tail_amp * tail_amp;
    }
    throw TruncationError("coherent state |alpha|=" + std::to_string(std::abs(alpha)) +
                              " needs n_max >= " + std::to_string(required),
                          required);
  }
  return v;
}

cplx inner(const FockVector& u, const FockVector& v) {
  const auto n = std::min(u.amplitudes.size(), v.amplitudes.size());
  return u.amplitudes.head(n).dot(v.amplitudes.head(n));  // conjugates u
}

void hermite_functions(double x, int n_max, std::vector<double>& out) {
  out.assign(n_max + 1, 0.0);
  out[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-x * x / 2.0);
  if (n_max == 0) return;
  out[1] = std::numbers::sqrt2 * x * out[0];
  for (int n = 1; n < n_max; ++n) {
    const double k = n + 1.0;
    out[n + 1] = std::sqrt(2.0 / k) * x * out[n] - std::sqrt(n / k) * out[n - 1];
  }
}

Eigen::MatrixXd hermite_overlap(double lo, double hi, int n_max) {
  const double edge = support_edge(n_max);
  lo = std::max(lo, -edge);
  hi = std::min(hi, edge);
  if (!(hi > lo)) return Eigen::MatrixXd::Zero(n_max + 1, n_max + 1);
  int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / kPanelWidth)));
  Eigen::MatrixXd coarse = composite_overlap(lo, hi, n_max, panels);
  for (int attempt = 0; attempt < kMaxPanelHalvings; ++attempt) {
    panels *= 2;
    Eigen::MatrixXd fine = composite_overlap(lo, hi, n_max, panels);
    const double change = (fine - coarse).cwiseAbs().maxCoeff();
    if (change <= kOverlapTol) return fine;
    coarse = std::move(fine);
  }
  throw std::runtime_error("hermite_overlap: quadrature failed to converge");
}

FockOperator x_bin_operator(double b, int n_max) {
  if (!(b > 0.0)) throw std::invalid_argument("b must be positive");
  return from_projector(hermite_overlap(-b, b, n_max).cast<cplx>());
}

FockOperator p_threshold_operator(double threshold, int n_max) {
  const Eigen::MatrixXd overlap = hermite_overlap(-support_edge(n_max), threshold, n_max);
  static constexpr cplx kPowersOfI[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  // <m|p><p|n> = i^m (-i)^n psi_m psi_n = i^(m-n) psi_m psi_n
  Eigen::MatrixXcd projector(n_max + 1, n_max + 1);
  for (int m = 0; m <= n_max; ++m) {
    for (int n = 0; n <= n_max; ++n) {
      projector(m, n) = kPowersOfI[((m - n) % 4 + 4) % 4] * overlap(m, n);
    }
  }
  return from_projector(projector);
}

FockOperator noclick_operator(double eta, int n_max) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("eta out of [0,1]");
  Eigen::VectorXcd diag(n_max + 1);
  for (int n = 0; n <= n_max; ++n) diag(n) = 2.0 * std::pow(1.0 - eta, n) - 1.0;
  FockOperator op;
  op.matrix = diag.asDiagonal();
  op.hermitian = true;
  return op;
}

HybridState lossy_hybrid_state(const StateSpec& state, double t_line, int n_max) {
  validate(state);
  validate(ChannelSpec{t_line, 1.0, 1.0});
  if (n_max <= 0) n_max = truncation_for(state.alpha_mag);
  const cplx i{0.0, 1.0};
  HybridState h;
  h.branch_s = coherent_fock(0.0, n_max);
  h.branch_s.amplitudes *= std::cos(state.nu);
  h.branch_g = coherent_fock(i * std::sqrt(t_line) * state.alpha_mag, n_max);
  h.branch_g.amplitudes *= std::sin(state.nu);
  const auto env_s = coherent_fock(0.0, n_max);
  const auto env_g = coherent_fock(i * std::sqrt(1.0 - t_line) * state.alpha_mag, n_max);
  h.decoherence_v = std::abs(inner(env_g, env_s));
  return h;
}

Eigen::MatrixXcd hybrid_density(const HybridState& h) {
  const auto d = h.branch_s.amplitudes.size();
  if (h.branch_g.amplitudes.size() != d) throw std::invalid_argument("branch dimension mismatch");
  const auto& s = h.branch_s.amplitudes;
  const auto& g = h.branch_g.amplitudes;
  Eigen::MatrixXcd rho(2 * d, 2 * d);
  rho.topLeftCorner(d, d) = s * s.adjoint();
  rho.topRightCorner(d, d) = h.decoherence_v * s * g.adjoint();
  rho.bottomLeftCorner(d, d) = h.decoherence_v * g * s.adjoint();
  rho.bottomRightCorner(d, d) = g * g.adjoint();
  return rho;
}

Eigen::MatrixXcd lossy_hybrid_density_two_mode(const StateSpec& state, double t_line, int n_max) {
  validate(state);
  const cplx i{0.0, 1.0};
  const auto input = coherent_fock(i * state.alpha_mag, n_max);
  const double t = std::sqrt(t_line);
  const double r = std::sqrt(1.0 - t_line);
  const int d = n_max + 1;
  // psi_g(k, j): field k, environment j after a^dagger -> t a^dagger + r e^dagger.
  Eigen::MatrixXcd psi_g = Eigen::MatrixXcd::Zero(d, d);
  for (int m = 0; m <= n_max; ++m) {
    for (int k = 0; k <= m; ++k) {
      const double binom = std::exp(0.5 * (std::lgamma(m + 1.0) - std::lgamma(k + 1.0) -
                                           std::lgamma(m - k + 1.0)));
      psi_g(k, m - k) += input.amplitudes(m) * binom * std::pow(t, k) * std::pow(r, m - k);
    }
  }
  psi_g *= std::sin(state.nu);
  Eigen::MatrixXcd psi_s = Eigen::MatrixXcd::Zero(d, d);
  psi_s(0, 0) = std::cos(state.nu);

  Eigen::MatrixXcd rho(2 * d, 2 * d);
  rho.topLeftCorner(d, d) = psi_s * psi_s.adjoint();
  rho.topRightCorner(d, d) = psi_s * psi_g.adjoint();
  rho.bottomLeftCorner(d, d) = psi_g * psi_s.adjoint();
  rho.bottomRightCorner(d, d) = psi_g * psi_g.adjoint();
  return rho;
}

double chsh_expectation(const HybridState& hybrid, double gamma, const FockOperator& b0,
                        const FockOperator& b1) {
  const auto d = hybrid.branch_s.amplitudes.size();
  if (b0.matrix.rows() != static_cast<Eigen::Index>(d) || b1.matrix.rows() != static_cast<Eigen::Index>(d)) {
    throw std::invalid_argument("dimension mismatch between state and measurement operators");
  }
  const Eigen::MatrixXcd rho = hybrid_density(hybrid);
  Eigen::Matrix2cd sz;
  sz << 1, 0, 0, -1;
  Eigen::Matrix2cd sx;
  sx << 0, 1, 1, 0;
  const Eigen::Matrix2cd a0 = std::cos(gamma) * sz + std::sin(gamma) * sx;
  const Eigen::Matrix2cd a1 = std::cos(gamma) * sz - std::sin(gamma) * sx;

  auto correlator = [&](const Eigen::Matrix2cd& a, const FockOperator& b) {
    Eigen::MatrixXcd op(2 * d, 2 * d);
    for (int x = 0; x < 2; ++x) {
      for (int y = 0; y < 2; ++y) op.block(x * d, y * d, d, d) = a(x, y) * b.matrix;
    }
    return (rho * op).trace().real();
  };
  return correlator(a0, b1) + correlator(a1, b1) + correlator(a0, b0) - correlator(a1, b0);
}

OracleCoefficients photocount_coefficients(double alpha_mag, double t_line, double eta, double b,
                                           int n_max) {
  if (n_max <= 0) n_max = truncation_for(alpha_mag);
  const cplx i{0.0, 1.0};
  const auto vac = coherent_fock(0.0, n_max);
  const auto beta = coherent_fock(i * std::sqrt(t_line) * alpha_mag, n_max);
  const double v =
      std::abs(inner(coherent_fock(i * std::sqrt(1.0 - t_line) * alpha_mag, n_max), vac));
  const auto b0 = x_bin_operator(b, n_max);
  const auto b1 = noclick_operator(eta, n_max);
  OracleCoefficients out;
  out.c1 = v * beta.amplitudes.dot(b0.matrix * vac.amplitudes).real();
  out.c2 = vac.amplitudes.dot(b1.matrix * vac.amplitudes).real();
  out.c3 = beta.amplitudes.dot(b1.matrix * beta.amplitudes).real();
  return out;
}

OracleCoefficients twohomodyne_coefficients(double alpha_mag, double t_line, double b,
                                            double p_threshold, int n_max) {
  if (n_max <= 0) n_max = truncation_for(alpha_mag);
  const cplx i{0.0, 1.0};
  const auto vac = coherent_fock(0.0, n_max);
  const auto beta = coherent_fock(i * std::sqrt(t_line) * alpha_mag, n_max);
  const double v =
      std::abs(inner(coherent_fock(i * std::sqrt(1.0 - t_line) * alpha_mag, n_max), vac));
  const auto b0 = x_bin_operator(b, n_max);
  const auto b1 = p_threshold_operator(p_threshold, n_max);
  OracleCoefficients out;
  out.c1 = v * beta.amplitudes.dot(b0.matrix * vac.amplitudes).real();
  out.c2 = vac.amplitudes.dot(b1.matrix * vac.amplitudes).real();
  out.c3 = beta.amplitudes.dot(b1.matrix * beta.amplitudes).real();
  return out;
}

}  // namespace hybridbell::oracle
