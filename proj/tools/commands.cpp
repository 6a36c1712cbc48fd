#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "hybridbell/catstates.hpp"
#include "hybridbell/coefficients.hpp"
#include "hybridbell/verify.hpp"

#ifndef HYBRIDBELL_VERSION
#define HYBRIDBELL_VERSION "0.0.0"
#endif

namespace hybridbell::cli {
namespace {

double parse_double(std::string_view text, std::string_view flag) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw CliError(std::string(flag) + ": cannot parse '" + std::string(text) + "' as a number");
  }
  return v;
}

void check_unit_range(const Range& r, std::string_view name) {
  if (r.min < 0.0 || r.max > 1.0) throw CliError(std::string(name) + " range must lie within [0,1]");
}

}  // namespace

std::vector<double> Range::values() const {
  const auto n = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = std::min(max, min + static_cast<double>(i) * step);
  return out;
}

Range parse_range(std::string_view text, std::string_view flag) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string_view::npos ? colon : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  Range r;
  if (parts.size() == 1) {
    r.min = r.max = parse_double(parts[0], flag);
    r.step = 1.0;
  } else if (parts.size() == 3) {
    r.min = parse_double(parts[0], flag);
    r.max = parse_double(parts[1], flag);
    r.step = parse_double(parts[2], flag);
  } else {
    throw CliError(std::string(flag) + ": expected MIN:MAX:STEP or a single value");
  }
  if (!(r.step > 0.0)) throw CliError(std::string(flag) + ": step must be positive");
  if (r.max < r.min) throw CliError(std::string(flag) + ": MAX below MIN");
  return r;
}

Scenario parse_scenario(std::string_view kind, std::string_view convention) {
  Scenario s;
  if (kind == "photocount") {
    s.kind = ScenarioKind::Photocount;
  } else if (kind == "two-homodyne") {
    s.kind = ScenarioKind::TwoHomodyne;
  } else {
    throw CliError("--scenario must be photocount or two-homodyne");
  }
  if (convention == "paper") {
    s.loss_convention = LossConvention::PaperFaithful;
  } else if (convention == "born") {
    s.loss_convention = LossConvention::BornRule;
  } else {
    throw CliError("--convention must be paper or born");
  }
  return s;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  // Shortest form first; fall back to 9 significant digits when it is longer.
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string shortest(buf, res.ptr);
  res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  std::string limited(buf, res.ptr);
  return shortest.size() <= limited.size() ? shortest : limited;
}

void validate(const SweepRequest& r) {
  check_unit_range(r.t_range, "--t-line");
  check_unit_range(r.second, r.second_axis == SecondAxis::EtaA ? "--eta-a" : "--eta");
  if (r.jobs < 1) throw CliError("--jobs must be positive");
  if (r.second_axis == SecondAxis::EtaA && r.scenario.kind != ScenarioKind::TwoHomodyne) {
    throw CliError("--eta-a sweeps require --scenario two-homodyne");
  }
  if (r.second_axis == SecondAxis::Eta && r.scenario.kind != ScenarioKind::Photocount) {
    throw CliError("--eta sweeps require --scenario photocount");
  }
}

std::vector<SweepRow> run_sweep(const SweepRequest& request, const OptimizerSettings& settings) {
  validate(request);
  const auto ts = request.t_range.values();
  const auto seconds = request.second.values();
  std::vector<SweepRow> rows;
  rows.reserve(ts.size() * seconds.size());
  for (double t : ts) {
    for (double x : seconds) rows.push_back({t, x, {}});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      ChannelSpec ch{rows[i].t_line, 1.0, 1.0};
      if (request.second_axis == SecondAxis::Eta) ch.eta = rows[i].second;
      if (request.second_axis == SecondAxis::EtaA) ch.eta_a = rows[i].second;
      rows[i].result = optimize(ch, request.scenario, settings);
    }
  };
  const int jobs = std::min<int>(request.jobs, static_cast<int>(std::max<std::size_t>(rows.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     const std::string& invocation) {
  out << "# " << version_string() << '\n';
  out << "# invocation: " << invocation << '\n';
  out << kSweepHeader << '\n';
  for (const auto& row : rows) {
    const auto& r = row.result;
    out << format_number(row.t_line) << ',' << format_number(row.second) << ','
        << format_number(r.s_value) << ',' << format_number(r.alpha_opt) << ','
        << format_number(r.nu_opt) << ',' << format_number(r.gamma_opt) << ','
        << format_number(r.b_opt) << ',' << format_number(r.coeffs.c1) << ','
        << format_number(r.coeffs.c2) << ',' << format_number(r.coeffs.c3) << '\n';
  }
}

void cmd_sweep(const SweepRequest& request, const OptimizerSettings& settings,
               const std::string& invocation) {
  if (request.output_path.empty()) throw CliError("--out is required");
  const auto rows = run_sweep(request, settings);
  std::ofstream file(request.output_path, std::ios::binary);
  if (!file) throw CliError("cannot open '" + request.output_path + "' for writing");
  write_sweep_csv(file, rows, invocation);
  if (!file) throw CliError("write to '" + request.output_path + "' failed");
}

std::string cmd_threshold(const Scenario& scenario, FreeParam param, const ChannelSpec& fixed,
                          const OptimizerSettings& settings) {
  ThresholdResult r;
  try {
    r = violation_threshold(scenario, param, fixed, settings);
  } catch (const std::runtime_error& e) {
    throw CliError(e.what());
  }
  std::ostringstream line;
  line << (param == FreeParam::TLine ? "t_line" : "eta_a") << ' ' << format_number(r.value)
       << " bracket [" << format_number(r.lo) << ", " << format_number(r.hi) << "]"
       << " s_below " << format_number(r.s_lo) << " (S-2 " << format_number(r.excess_lo) << ")"
       << " s_above " << format_number(r.s_hi) << " (S-2 " << format_number(r.excess_hi) << ")";
  return line.str();
}

void cmd_theorem1(const std::vector<double>& etas, double alpha_search_max,
                  LossConvention convention, const OptimizerSettings& settings, std::ostream& out) {
  out << "eta,witness_alpha,witness_s,excess,onset_alpha,asymptotic_alpha,asymptotic_holds\n";
  for (double eta : etas) {
    if (!(eta > 0.0 && eta <= 1.0)) throw CliError("eta values must lie in (0,1]");
    const auto w = theorem1_witness(eta, alpha_search_max, convention, settings);
    out << format_number(eta) << ',';
    if (w.found) {
      out << format_number(w.alpha) << ',' << format_number(w.s) << ',' << format_number(w.excess)
          << ',' << format_number(w.onset_alpha);
    } else {
      out << "none,none,none,none";
    }
    out << ',' << (w.asymptotic_alpha ? format_number(*w.asymptotic_alpha) : std::string("all"))
        << ',' << (w.found ? (w.asymptotic_condition_holds ? "holds" : "fails") : "n/a") << '\n';
  }
}

void cmd_cat(double alpha_mag, double nu, int n_modes, std::ostream& out) {
  const StateSpec state{nu, alpha_mag};
  const auto cat = herald_cat(state);
  const auto cascade = equal_amplitude_cascade(n_modes);
  const auto split = split_cat(cat, cascade);
  out << "cat_amplitude " << format_number(cat.alpha.real()) << (cat.alpha.imag() < 0 ? "-" : "+")
      << format_number(std::abs(cat.alpha.imag())) << "i\n";
  out << "norm " << format_number(cat.norm) << '\n';
  out << "heralding_probability " << format_number(heralding_probability(state)) << '\n';
  out << "transmittivities";
  for (double t : cascade.transmittivities()) out << ' ' << format_number(t);
  out << '\n';
  double energy = 0.0;
  out << "mode_amplitudes";
  for (const auto& a : split.plus_branch) out << ' ' << format_number(std::abs(a));
  out << '\n';
  for (double f : split.factors) energy += f * f;
  out << "energy_sum " << format_number(energy) << '\n';
}

int cmd_verify(std::uint64_t seed, int samples, bool self_test, std::ostream& out) {
  if (samples < 1) throw CliError("--samples must be positive");
  verify::Options options;
  options.seed = seed;
  options.samples = samples;
  options.tolerance_scale = self_test ? 0.0 : 1.0;
  const auto report = verify::run_all(options);
  out << "seed " << seed << " samples " << samples << (self_test ? " (self-test: tolerances zeroed)" : "")
      << '\n';
  out << verify::format_report(report);
  if (report.passed()) return 0;
  std::string failed;
  for (const auto& suite : report.suites()) {
    if (!report.suite_passed(suite)) failed += (failed.empty() ? "" : ", ") + suite;
  }
  out.flush();
  throw CliError("verification failed in: " + failed);
}

std::string version_string() { return std::string("hybridbell ") + HYBRIDBELL_VERSION; }

}  // namespace hybridbell::cli
