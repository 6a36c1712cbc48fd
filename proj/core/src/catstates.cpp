#include "hybridbell/catstates.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hybridbell {

double cat_norm(double nu, double alpha_mag) {
  return 1.0 / std::sqrt(1.0 + std::sin(2.0 * nu) * std::exp(-2.0 * alpha_mag * alpha_mag));
}

CatState herald_cat(const StateSpec& state) {
  validate(state);
  const double half = state.alpha_mag / 2.0;
  return {state.nu, {0.0, half}, cat_norm(state.nu, half)};
}

double heralding_probability(const StateSpec& state) {
  validate(state);
  return 0.5 * (1.0 + std::sin(2.0 * state.nu) * std::exp(-state.alpha_mag * state.alpha_mag / 2.0));
}

CascadeSpec::CascadeSpec(std::vector<double> transmittivities) : t_(std::move(transmittivities)) {
  if (t_.empty()) throw ValidationError("cascade needs at least one beamsplitter");
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (!(t_[i] > 0.0 && t_[i] <= 1.0)) {
      throw ValidationError("transmittivity " + std::to_string(i) + " out of (0,1]");
    }
  }
}

std::vector<double> CascadeSpec::reflectivities() const {
  std::vector<double> r;
  r.reserve(t_.size());
  for (double t : t_) r.push_back(std::sqrt((1.0 - t) * (1.0 + t)));
  return r;
}

SplitCat split_cat(const CatState& cat, const CascadeSpec& cascade) {
  SplitCat out{cat.nu, cat.norm, cat.alpha, {}, {}, {}};
  const auto r = cascade.reflectivities();
  double carried = 1.0;
  for (std::size_t k = 0; k < cascade.splitters(); ++k) {
    out.factors.push_back(r[k] * carried);
    carried *= cascade.transmittivities()[k];
  }
  out.factors.push_back(carried);
  for (double f : out.factors) {
    out.plus_branch.push_back(f * cat.alpha);
    out.minus_branch.push_back(-f * cat.alpha);
  }
  return out;
}

CascadeSpec equal_amplitude_cascade(int n_modes) {
  if (n_modes < 2) throw ValidationError("n_modes must be at least 2");
  std::vector<double> t;
  double t_sq = static_cast<double>(n_modes - 1) / n_modes;
  for (int k = 0; k < n_modes - 1; ++k) {
    if (k > 0) t_sq = 2.0 - 1.0 / t_sq;
    if (!(t_sq > 0.0)) throw std::runtime_error("transmittivity recursion left (0,1]");
    t.push_back(std::sqrt(t_sq));
  }
  return CascadeSpec(std::move(t));
}

}  // namespace hybridbell
