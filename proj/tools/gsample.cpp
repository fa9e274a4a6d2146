// gsample: analyze, round-trip and verify sampling scenarios from JSON configs.
//
// Exit codes: 0 pass, 1 numerical or precondition failure, 2 usage or schema error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gsamp/scenario.hpp"

namespace fs = std::filesystem;
using namespace gsamp;

namespace {

#ifndef GSAMP_SCENARIO_DIR
#define GSAMP_SCENARIO_DIR "scenarios"
#endif

fs::path scenario_dir() {
  if (const char* env = std::getenv("GSAMPLE_SCENARIO_DIR")) return env;
  return GSAMP_SCENARIO_DIR;
}

using Runner = RunReport (*)(const ScenarioConfig&, const RunOptions&);

RunReport run_all(const std::string& command, Runner runner, const std::vector<fs::path>& files,
                  const RunOptions& opts) {
  std::vector<ScenarioConfig> configs;
  for (const auto& f : files)
    for (auto& c : load_scenarios(f)) configs.push_back(std::move(c));
  if (configs.size() == 1) return runner(configs.front(), opts);

  RunReport all{{{"command", command}, {"reports", json::array()}}, kExitPass};
  for (const auto& c : configs) {
    RunReport r = runner(c, opts);
    all.exit_code = std::max(all.exit_code, r.exit_code);
    all.report["reports"].push_back(std::move(r.report));
  }
  all.report["pass"] = all.exit_code == kExitPass;
  return all;
}

void emit(const RunReport& r, const std::string& command, const std::string& report_path) {
  const std::string text = dump_fixed(r.report);
  std::cout << text << '\n';
  fs::path out = report_path;
  if (out.empty()) {
    const char* dir = std::getenv("GSAMPLE_REPORT_DIR");
    if (!dir) return;
    const std::string name = r.report.contains("scenario") ? r.report["scenario"].get<std::string>() : "all";
    out = fs::path(dir) / (command + "-" + name + ".json");
  }
  std::ofstream f(out);
  if (!f) throw SchemaError("cannot write report to " + out.string());
  f << text << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regular sampling and reconstruction on finite abelian groups"};
  app.require_subcommand(1);

  RunOptions opts;
  std::string left_inverse, report_path;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::string config;
  bool all = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--tol", tol, "Absolute frame tolerance on delta_A")->check(CLI::NonNegativeNumber);
    sub->add_option("--left-inverse", left_inverse, "Left inverse: mp, family or square")
        ->check(CLI::IsMember({"mp", "family", "square"}));
    sub->add_option("--report", report_path, "Also write the JSON report to this file");
    sub->add_flag("--timings", opts.timings, "Include wall-clock timings in the report");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "Frame diagnostics for a scenario");
  analyze->add_option("config", config, "Scenario config")->required();
  common(analyze);

  CLI::App* roundtrip = app.add_subcommand("roundtrip", "Sample and reconstruct random coefficients");
  roundtrip->add_option("config", config, "Scenario config")->required();
  CLI::Option* seed_opt = roundtrip->add_option("--seed", seed, "RNG seed (default: the config's seed)");
  roundtrip->add_flag("--inject-fault", opts.inject_fault, "Perturb the left inverse before checking it");
  common(roundtrip);

  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suite");
  CLI::Option* cfg_opt = verify->add_option("config", config, "Scenario config");
  CLI::Option* all_opt = verify->add_flag("--all", all, "Verify every bundled scenario");
  cfg_opt->excludes(all_opt);
  verify->add_flag("--inject-fault", opts.inject_fault, "Perturb the left inverse before checking it");
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (*seed_opt) opts.seed = seed;
  if (tol) opts.frame_tol = tol;
  if (!left_inverse.empty()) opts.dual = parse_dual_kind(left_inverse);

  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    Runner runner = command == "analyze" ? cmd_analyze : command == "roundtrip" ? cmd_roundtrip : cmd_verify;
    std::vector<fs::path> files;
    if (all) {
      files = scenario_files(scenario_dir());
    } else if (config.empty()) {
      std::cerr << "verify: give a config or --all\n";
      return kExitUsage;
    } else {
      files.push_back(config);
    }
    const RunReport r = run_all(command, runner, files, opts);
    emit(r, command, report_path);
    return r.exit_code;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}
