#include "hybridbell/model.hpp"

#include <cmath>

namespace hybridbell {
namespace {

void require_unit(double v, const char* field) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError(std::string(field) + " out of [0,1]");
  }
}

}  // namespace

StateSpec validate(const StateSpec& s) {
  if (!(s.nu >= 0.0 && s.nu <= std::numbers::pi / 2)) {
    throw ValidationError("nu out of [0, pi/2]");
  }
  if (!(s.alpha_mag >= 0.0) || !std::isfinite(s.alpha_mag)) {
    throw ValidationError("alpha_mag out of [0, inf)");
  }
  return s;
}

ChannelSpec validate(const ChannelSpec& c) {
  require_unit(c.t_line, "t_line");
  require_unit(c.eta, "eta");
  require_unit(c.eta_a, "eta_a");
  return c;
}

MeasurementSpec validate(const MeasurementSpec& m) {
  if (!(m.b > 0.0)) throw ValidationError("b out of (0, inf)");
  if (!std::isfinite(m.gamma)) throw ValidationError("gamma must be finite");
  if (std::isnan(m.p_threshold)) throw ValidationError("p_threshold must not be NaN");
  return m;
}

std::string to_string(ScenarioKind k) {
  return k == ScenarioKind::Photocount ? "photocount" : "two-homodyne";
}

std::string to_string(LossConvention c) {
  return c == LossConvention::PaperFaithful ? "paper" : "born";
}

}  // namespace hybridbell
