#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hybridbell::verify {

/// One measured deviation against its tolerance.
struct Check {
  std::string suite;
  std::string name;
  double deviation = 0.0;
  double tolerance = 0.0;

  bool passed() const { return deviation <= tolerance; }
};

struct Options {
  std::uint64_t seed = 20131018;
  int samples = 50;
  /// Multiplies every tolerance; 0 turns the harness against itself.
  double tolerance_scale = 1.0;
};

struct Report {
  std::vector<Check> checks;

  bool passed() const;
  std::vector<std::string> suites() const;
  double max_deviation(const std::string& suite) const;
  bool suite_passed(const std::string& suite) const;
};

std::vector<Check> coefficients_suite(const Options& options);
std::vector<Check> chsh_suite(const Options& options);
std::vector<Check> oracle_suite(const Options& options);
std::vector<Check> catstates_suite(const Options& options);

Report run_all(const Options& options);

/// Plain-text report; byte-identical for identical options.
std::string format_report(const Report& report);

/// Reproducible uniform doubles independent of the standard library's
/// distribution implementations.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : state_(seed) {}
  double next();                            ///< [0, 1)
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::uint64_t state_;
};

}  // namespace hybridbell::verify
