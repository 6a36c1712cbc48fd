#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "hybridbell/model.hpp"

// Brute-force reference engine on a truncated Fock space. Nothing here calls
// into the analytic coefficient formulas; agreement between the two is what
// the verification suites measure.
namespace hybridbell::oracle {

using cplx = std::complex<double>;

class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, int required)
      : std::runtime_error(what), required_n_max_(required) {}
  int required_n_max() const noexcept { return required_n_max_; }

 private:
  int required_n_max_;
};

/// Amplitudes on |0>..|n_max>.
struct FockVector {
  Eigen::VectorXcd amplitudes;

  int n_max() const { return static_cast<int>(amplitudes.size()) - 1; }
  double norm_squared() const { return amplitudes.squaredNorm(); }
};

struct FockOperator {
  Eigen::MatrixXcd matrix;
  bool hermitian = false;

  int n_max() const { return static_cast<int>(matrix.rows()) - 1; }
  /// max |M - M^dagger|
  double hermiticity_defect() const;
  /// Eigenvalues (requires hermitian).
  Eigen::VectorXd spectrum() const;
};

/// Photonic branches with the mixing weights folded in, plus the coherence
/// factor |<env_s|env_g>| of the traced-out loss environment.
struct HybridState {
  FockVector branch_s;
  FockVector branch_g;
  double decoherence_v = 1.0;
};

/// ceil(|alpha|^2 + 10|alpha| + 20).
int truncation_for(double max_alpha_mag);

/// e^{-|alpha|^2/2} alpha^n / sqrt(n!) by recurrence. Throws TruncationError
/// when the norm deficit exceeds 1e-10.
FockVector coherent_fock(cplx alpha, int n_max);

/// <u|v> over the common truncation.
cplx inner(const FockVector& u, const FockVector& v);

/// psi_0(x) .. psi_n_max(x) for x = (a + a^dagger)/sqrt(2), upward recurrence.
void hermite_functions(double x, int n_max, std::vector<double>& out);

/// integral_lo^hi psi_m psi_n dx for all m, n <= n_max (real symmetric).
Eigen::MatrixXd hermite_overlap(double lo, double hi, int n_max);

/// B0 = 2 int_{-b}^{b} |x><x| dx - 1.
FockOperator x_bin_operator(double b, int n_max);

/// B1 = 2 int_{-inf}^{threshold} |p><p| dp - 1, using <p|n> = (-i)^n psi_n(p).
FockOperator p_threshold_operator(double threshold, int n_max);

/// 2 sum_n (1 - eta)^n |n><n| - 1.
FockOperator noclick_operator(double eta, int n_max);

/// cos(nu)|0> and sin(nu)|i sqrt(T)|alpha|> with the coherence factor taken
/// from the Fock overlap of the environment states |0> and |i sqrt(1-T)|alpha|>.
/// n_max <= 0 selects truncation_for(alpha).
HybridState lossy_hybrid_state(const StateSpec& state, double t_line, int n_max = 0);

/// Rank-2 atom (x) field density matrix; atom index major, |s> first.
Eigen::MatrixXcd hybrid_density(const HybridState& hybrid);

/// Same reduced state, built by applying an explicit two-mode beamsplitter to
/// the field and its environment and tracing the environment out. Meant for
/// small n_max only (cost ~ n_max^4).
Eigen::MatrixXcd lossy_hybrid_density_two_mode(const StateSpec& state, double t_line, int n_max);

/// <A0 B1> + <A1 B1> + <A0 B0> - <A1 B0> by direct trace with
/// A0,1 = cos(gamma) sz +- sin(gamma) sx.
double chsh_expectation(const HybridState& hybrid, double gamma, const FockOperator& b0,
                        const FockOperator& b1);

/// Coefficients obtained from the oracle operators:
/// c1 = V Re<beta|B0|0>, c2 = <0|B1|0>, c3 = <beta|B1|beta>, beta = i sqrt(T)|alpha|.
struct OracleCoefficients {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
};

OracleCoefficients photocount_coefficients(double alpha_mag, double t_line, double eta, double b,
                                           int n_max = 0);
OracleCoefficients twohomodyne_coefficients(double alpha_mag, double t_line, double b,
                                            double p_threshold, int n_max = 0);

}  // namespace hybridbell::oracle
