#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace hybridbell {

/// Raised when a parameter violates its documented range. The message names
/// the offending field and the bound, e.g. "t_line out of [0,1]".
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Atom-field state cos(nu)|s,0> + sin(nu)|g,alpha>.
///
/// Only the magnitude of alpha is stored. The amplitude is taken purely
/// imaginary (i*alpha_mag), which puts the coherent branch on the P axis and
/// maximizes its X-quadrature overlap with vacuum; every formula and the Fock
/// oracle follow this convention.
struct StateSpec {
  double nu = 0.0;
  double alpha_mag = 0.0;

  friend bool operator==(const StateSpec&, const StateSpec&) = default;
};

/// Loss parameters, all in [0,1].
struct ChannelSpec {
  double t_line = 1.0;  ///< intensity transmission of the line
  double eta = 1.0;     ///< photocounting efficiency
  double eta_a = 1.0;   ///< atomic detection efficiency

  friend bool operator==(const ChannelSpec&, const ChannelSpec&) = default;
};

enum class ScenarioKind { Photocount, TwoHomodyne };

/// No-click probability used for the photocount B1.
///  - PaperFaithful: 2 exp(-eta T |alpha|^2 / 2) - 1, halved exponent.
///  - BornRule:      2 exp(-eta T |alpha|^2) - 1, i.e. twice |<0|beta>|^2 minus
///                   one for the attenuated amplitude. Gives the optimum
///                   S = 2.324 and the 52.2% transmission threshold.
enum class LossConvention { PaperFaithful, BornRule };

struct Scenario {
  ScenarioKind kind = ScenarioKind::Photocount;
  LossConvention loss_convention = LossConvention::BornRule;  // Photocount only

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Atomic angle gamma, X-bin half-width b and P threshold of the two-homodyne B1.
struct MeasurementSpec {
  double gamma = 0.0;
  double b = 1.0;
  double p_threshold = 0.0;

  friend bool operator==(const MeasurementSpec&, const MeasurementSpec&) = default;
};

/// (c1, c2, c3) determine the CHSH value of a scenario.
///
/// one_minus_c2 and one_plus_c3 carry 1 - c2 and 1 + c3 without cancellation.
/// Near the violation thresholds S - 2 is of order 1e-16 and depends on these
/// gaps, which the rounded c2, c3 cannot resolve.
struct Coefficients {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double one_minus_c2 = 1.0;
  double one_plus_c3 = 1.0;

  /// Plain triple; gaps derived by subtraction.
  static Coefficients from(double c1, double c2, double c3) {
    return {c1, c2, c3, 1.0 - c2, 1.0 + c3};
  }

  friend bool operator==(const Coefficients&, const Coefficients&) = default;
};

/// Optimized CHSH value with the parameters that attain it.
struct ChshResult {
  double s_value = 0.0;
  double excess = -2.0;  ///< s_value - 2, evaluated without cancellation
  double nu_opt = 0.0;
  double gamma_opt = 0.0;
  double b_opt = 0.0;
  double alpha_opt = 0.0;
  bool c1_ok = false;
  bool c2_ok = false;
  Coefficients coeffs{};
};

inline constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;

StateSpec validate(const StateSpec& s);
ChannelSpec validate(const ChannelSpec& c);
MeasurementSpec validate(const MeasurementSpec& m);

std::string to_string(ScenarioKind k);
std::string to_string(LossConvention c);

}  // namespace hybridbell
