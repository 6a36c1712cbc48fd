#pragma once

#include <complex>
#include <vector>

#include "hybridbell/model.hpp"

namespace hybridbell {

/// N (cos nu |-alpha> + sin nu |alpha>).
struct CatState {
  double nu = 0.0;
  std::complex<double> alpha{};  ///< amplitude of the |+alpha> branch
  double norm = 1.0;             ///< N(alpha)
};

/// [1 + sin(2 nu) exp(-2|alpha|^2)]^{-1/2}, from <-alpha|alpha> = exp(-2|alpha|^2).
double cat_norm(double nu, double alpha_mag);

/// Heralds on the atomic outcome (|s> + |g>)/sqrt(2) and displaces by -alpha/2.
///
/// The heralded field cos nu |0> + sin nu |alpha> is centred by D(-alpha/2),
/// so the cat amplitude is HALF the input amplitude: input |alpha| = 4 gives a
/// cat with amplitude 2i (imaginary convention).
CatState herald_cat(const StateSpec& state);

/// Probability of the (|s> + |g>)/sqrt(2) outcome: (1 + sin 2nu e^{-|alpha|^2/2}) / 2.
double heralding_probability(const StateSpec& state);

/// Beamsplitter chain. Splitter i transmits t_i and reflects r_i = sqrt(1 - t_i^2);
/// the reflected port of splitter k is output mode k and the light transmitted
/// through the whole chain is the last mode.
class CascadeSpec {
 public:
  explicit CascadeSpec(std::vector<double> transmittivities);

  const std::vector<double>& transmittivities() const { return t_; }
  std::vector<double> reflectivities() const;
  std::size_t splitters() const { return t_.size(); }
  std::size_t modes() const { return t_.size() + 1; }

 private:
  std::vector<double> t_;
};

/// Output of split_cat: the |+> branch occupies mode k with factor[k] * alpha,
/// the |-> branch with -factor[k] * alpha.
struct SplitCat {
  double nu = 0.0;
  double norm = 1.0;
  std::complex<double> alpha{};
  std::vector<double> factors;  ///< f_k = r_k prod_{i<k} t_i, then prod t_i
  std::vector<std::complex<double>> plus_branch;
  std::vector<std::complex<double>> minus_branch;
};

SplitCat split_cat(const CatState& cat, const CascadeSpec& cascade);

/// n_modes - 1 splitters with t_1^2 = (N-1)/N and t_k^2 = 2 - 1/t_{k-1}^2,
/// giving |f_k| = 1/sqrt(N) on every mode.
CascadeSpec equal_amplitude_cascade(int n_modes);

}  // namespace hybridbell
