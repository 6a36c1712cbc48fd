#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hybridbell/chsh.hpp"
#include "hybridbell/model.hpp"

namespace hybridbell::cli {

/// User-facing failure; printed as a single `error: ...` line.
class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inclusive MIN:MAX:STEP grid; a bare number is a one-point range.
struct Range {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
};

Range parse_range(std::string_view text, std::string_view flag);
Scenario parse_scenario(std::string_view kind, std::string_view convention);

/// Shortest round-trip text limited to 9 significant digits, "C" locale.
std::string format_number(double v);

enum class SecondAxis { None, Eta, EtaA };

struct SweepRequest {
  Scenario scenario{};
  Range t_range{0.0, 1.0, 0.01};
  SecondAxis second_axis = SecondAxis::None;
  Range second{1.0, 1.0, 1.0};
  std::string output_path;
  int jobs = 1;
};

void validate(const SweepRequest& request);

struct SweepRow {
  double t_line = 0.0;
  double second = 1.0;
  ChshResult result;
};

/// Evaluates every grid point on `jobs` workers; rows come back sorted by
/// (t_line, second axis) whatever the scheduling.
std::vector<SweepRow> run_sweep(const SweepRequest& request, const OptimizerSettings& settings);

inline constexpr std::string_view kSweepHeader =
    "t_line,eta_or_eta_a,s_max,alpha_opt,nu_opt,gamma_opt,b_opt,c1,c2,c3";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& invocation);

/// Runs the sweep and writes request.output_path.
void cmd_sweep(const SweepRequest& request, const OptimizerSettings& settings,
               const std::string& invocation);

std::string cmd_threshold(const Scenario& scenario, FreeParam param, const ChannelSpec& fixed,
                          const OptimizerSettings& settings);

void cmd_theorem1(const std::vector<double>& etas, double alpha_search_max,
                  LossConvention convention, const OptimizerSettings& settings, std::ostream& out);

void cmd_cat(double alpha_mag, double nu, int n_modes, std::ostream& out);

/// Returns 0 when every suite passes; throws CliError naming the failed suites otherwise.
int cmd_verify(std::uint64_t seed, int samples, bool self_test, std::ostream& out);

std::string version_string();

}  // namespace hybridbell::cli
