#include <cstdint>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace hybridbell;
using namespace hybridbell::cli;

namespace {

// Recorded in the CSV header; --jobs is dropped so output does not depend on it.
std::string join_args(int argc, char** argv) {
  std::string out = "hybridbell";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--jobs") {
      ++i;
      continue;
    }
    if (arg.starts_with("--jobs=")) continue;
    out += ' ';
    out += arg;
  }
  return out;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_range(item, "--etas").min);
  if (out.empty()) throw CliError("--etas: empty list");
  return out;
}

double single_value(const std::string& text, std::string_view flag) {
  const auto r = parse_range(text, flag);
  if (r.min != r.max) throw CliError(std::string(flag) + ": expected a single value here");
  if (r.min < 0.0 || r.min > 1.0) throw CliError(std::string(flag) + ": value must lie in [0,1]");
  return r.min;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CHSH violation optimizer for hybrid atom-light entanglement under loss"};
  app.set_version_flag("--version", version_string());
  app.require_subcommand(1);

  std::string scenario = "photocount";
  std::string convention = "born";
  std::string t_line, eta, eta_a;
  double alpha_max = 12.0;
  std::string out_path;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  bool coarse = false;

  auto* sweep = app.add_subcommand("sweep", "Grid sweep of the optimized CHSH value, written as CSV");
  sweep->add_option("--scenario", scenario, "photocount | two-homodyne");
  sweep->add_option("--convention", convention, "Photocount loss convention: paper | born");
  sweep->add_option("--t-line", t_line, "Line transmission MIN:MAX:STEP");
  sweep->add_option("--eta", eta, "Photocount efficiency MIN:MAX:STEP (photocount)");
  sweep->add_option("--eta-a", eta_a, "Atomic detection efficiency MIN:MAX:STEP (two-homodyne)");
  sweep->add_option("--alpha-max", alpha_max, "Upper end of the amplitude search");
  sweep->add_option("--out", out_path, "Output CSV path")->required();
  sweep->add_option("--jobs", jobs, "Worker threads");
  sweep->add_flag("--coarse", coarse, "Default grids at step 0.05 instead of 0.01");

  std::string param = "t-line";
  auto* threshold = app.add_subcommand("threshold", "Smallest parameter value that still violates CHSH");
  threshold->add_option("--scenario", scenario, "photocount | two-homodyne");
  threshold->add_option("--convention", convention, "paper | born");
  threshold->add_option("--param", param, "Free parameter: t-line | eta-a");
  threshold->add_option("--t-line", t_line, "Fixed line transmission (with --param eta-a)");
  threshold->add_option("--eta", eta, "Fixed photocount efficiency");
  threshold->add_option("--alpha-max", alpha_max, "Upper end of the amplitude search");

  std::string etas = "1,0.1,0.01,0.001";
  double search_max = 5000.0;
  std::string t1_convention = "paper";
  auto* theorem1 = app.add_subcommand("theorem1", "Violation witnesses for arbitrarily small efficiency");
  theorem1->add_option("--etas", etas, "Comma-separated efficiencies in (0,1]");
  theorem1->add_option("--alpha-max", search_max, "Upper end of the amplitude search");
  theorem1->add_option("--convention", t1_convention, "paper | born");

  double cat_alpha = 4.0;
  double cat_nu = std::numbers::pi / 4;
  int modes = 2;
  auto* cat = app.add_subcommand("cat", "Heralded cat state and equal-amplitude beamsplitter cascade");
  cat->add_option("--alpha", cat_alpha, "Input coherent amplitude |alpha|");
  cat->add_option("--nu", cat_nu, "State angle nu in [0, pi/2]");
  cat->add_option("--modes", modes, "Number of output modes (>= 2)");

  std::uint64_t seed = 20131018;
  int samples = 50;
  bool self_test = false;
  auto* verify = app.add_subcommand("verify", "Cross-check closed forms against the Fock-space oracle");
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--samples", samples, "Random parameter tuples per check");
  verify->add_flag("--self-test", self_test, "Zero every tolerance; must fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    OptimizerSettings settings;
    settings.alpha_max = alpha_max;

    if (*sweep) {
      SweepRequest req;
      req.scenario = parse_scenario(scenario, convention);
      const double step = coarse ? 0.05 : 0.01;
      req.t_range = t_line.empty() ? Range{0.0, 1.0, step} : parse_range(t_line, "--t-line");
      if (!eta.empty() && !eta_a.empty()) throw CliError("--eta and --eta-a are mutually exclusive");
      if (!eta.empty()) {
        req.second_axis = SecondAxis::Eta;
        req.second = parse_range(eta, "--eta");
      } else if (!eta_a.empty()) {
        req.second_axis = SecondAxis::EtaA;
        req.second = parse_range(eta_a, "--eta-a");
      } else if (req.scenario.kind == ScenarioKind::Photocount) {
        req.second_axis = SecondAxis::Eta;
        req.second = Range{0.0, 1.0, step};
      }
      req.output_path = out_path;
      req.jobs = jobs;
      validate(settings);
      cmd_sweep(req, settings, join_args(argc, argv));
      return 0;
    }

    if (*threshold) {
      const auto sc = parse_scenario(scenario, convention);
      FreeParam free;
      if (param == "t-line") {
        free = FreeParam::TLine;
      } else if (param == "eta-a") {
        free = FreeParam::EtaA;
      } else {
        throw CliError("--param must be t-line or eta-a");
      }
      ChannelSpec fixed;
      if (!t_line.empty()) fixed.t_line = single_value(t_line, "--t-line");
      if (!eta.empty()) fixed.eta = single_value(eta, "--eta");
      validate(settings);
      std::cout << cmd_threshold(sc, free, fixed, settings) << '\n';
      return 0;
    }

    if (*theorem1) {
      const auto conv = parse_scenario("photocount", t1_convention).loss_convention;
      cmd_theorem1(parse_list(etas), search_max, conv, OptimizerSettings{}, std::cout);
      return 0;
    }

    if (*cat) {
      cmd_cat(cat_alpha, cat_nu, modes, std::cout);
      return 0;
    }

    if (*verify) return cmd_verify(seed, samples, self_test, std::cout);
  } catch (const std::exception& e) {
    std::cout.flush();
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
