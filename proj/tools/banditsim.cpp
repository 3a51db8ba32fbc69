#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bandit/config.hpp"
#include "bandit/output.hpp"
#include "bandit/runner.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int cmd_run(const std::string& configPath, int workers,
            const std::string& outOverride, long long seedOverride) {
  bandit::ExperimentSetup setup;
  try {
    bandit::ParsedConfig config = bandit::parse_config_file(configPath);
    if (seedOverride >= 0) {
      config.sections["experiment"]["seed"] = std::to_string(seedOverride);
    }
    if (!outOverride.empty()) {
      config.sections["experiment"]["output"] = outOverride;
    }
    setup = bandit::build_experiment(config);
  } catch (const bandit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    bandit::ExperimentResult result = bandit::run_experiment(setup, workers);
    bandit::OutputPaths paths =
        bandit::write_outputs(setup, result, setup.outputDir);
    std::cout << "policy " << setup.policyName << " on " << setup.envKind
              << ": " << result.replications << " x " << result.horizon
              << " steps, " << workers << " worker(s), "
              << bandit::format_double(result.wallSeconds) << "s\n";
    for (const auto& [name, series] : result.metrics) {
      std::cout << "  final " << name << ": mean "
                << bandit::format_double(series.mean.back()) << ", sd "
                << bandit::format_double(series.sd.back()) << "\n";
    }
    for (const auto& outcome : result.bounds) {
      std::string verdict = "not applicable";
      if (outcome.verdict == bandit::BoundVerdict::BelowBound) {
        verdict = "below";
      } else if (outcome.verdict == bandit::BoundVerdict::AboveBound) {
        verdict = "ABOVE";
      }
      std::cout << "  bound " << bandit::bound_family_name(outcome.spec.family)
                << ": " << bandit::format_double(outcome.observed) << " vs "
                << bandit::format_double(outcome.bound) << " (" << verdict
                << ")\n";
    }
    std::cout << "  wrote " << paths.csv << ", " << paths.json << ", "
              << paths.svg << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_list_policies() {
  std::printf("%-20s %-11s %-45s %s\n", "name", "kind", "parameters",
              "summary");
  for (const auto& info : bandit::policy_registry()) {
    std::printf("%-20s %-11s %-45s %s\n", info.name.c_str(),
                info.kind.c_str(), info.params.c_str(), info.summary.c_str());
  }
  return kExitOk;
}

int cmd_plot(const std::string& csvPath, const std::string& outPath,
             const std::string& title) {
  try {
    std::ifstream in(csvPath, std::ios::binary);
    if (!in) {
      std::cerr << "cannot open " << csvPath << "\n";
      return kExitRuntime;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    bandit::ExperimentResult result = bandit::parse_results_csv(buf.str());
    std::ofstream out(outPath, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << outPath << "\n";
      return kExitRuntime;
    }
    out << bandit::results_svg(result, title.empty() ? csvPath : title);
    std::cout << "wrote " << outPath << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "plot failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

int cmd_report(const std::string& jsonPath) {
  try {
    std::ifstream in(jsonPath, std::ios::binary);
    if (!in) {
      std::cerr << "cannot open " << jsonPath << "\n";
      return kExitRuntime;
    }
    nlohmann::json j = nlohmann::json::parse(in);
    const auto& run = j.at("run");
    std::cout << "policy:       " << run.at("policy").get<std::string>()
              << "\n";
    std::cout << "environment:  " << run.at("environment").get<std::string>()
              << "\n";
    std::cout << "horizon:      " << run.at("horizon").get<std::uint64_t>()
              << "\n";
    std::cout << "replications: "
              << run.at("replications").get<std::uint64_t>() << "\n";
    std::cout << "workers:      " << run.at("workers").get<int>() << "\n";
    std::cout << "wall seconds: " << run.at("wall_seconds").get<double>()
              << "\n";
    if (j.contains("final")) {
      std::cout << "final metrics:\n";
      for (const auto& [name, v] : j.at("final").items()) {
        std::cout << "  " << name << ": mean ";
        if (v.at("mean").is_null()) {
          std::cout << "undefined";
        } else {
          std::cout << v.at("mean").get<double>();
        }
        std::cout << ", sd ";
        if (v.at("sd").is_null()) {
          std::cout << "undefined";
        } else {
          std::cout << v.at("sd").get<double>();
        }
        std::cout << "\n";
      }
    }
    if (j.contains("bounds") && !j.at("bounds").empty()) {
      std::cout << "bound comparisons:\n";
      for (const auto& b : j.at("bounds")) {
        std::cout << "  " << b.at("family").get<std::string>() << " ["
                  << b.at("reference").get<std::string>() << "]: observed ";
        if (b.at("observed").is_null()) {
          std::cout << "undefined";
        } else {
          std::cout << b.at("observed").get<double>();
        }
        std::cout << " vs bound ";
        if (b.at("bound").is_null()) {
          std::cout << "undefined";
        } else {
          std::cout << b.at("bound").get<double>();
        }
        std::cout << " -> " << b.at("verdict").get<std::string>() << "\n";
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "report failed: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"replicated bandit simulation harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run the experiment in a config file");
  std::string configPath;
  int workers = 1;
  std::string outDir;
  long long seed = -1;
  run->add_option("config", configPath, "path to the experiment config")
      ->required();
  run->add_option("--workers", workers, "replication threads (default 1)")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", outDir, "output directory override");
  run->add_option("--seed", seed, "master seed override")
      ->check(CLI::NonNegativeNumber);

  auto* list = app.add_subcommand("list-policies", "print the policy table");

  auto* plot = app.add_subcommand("plot", "render a results csv as svg");
  std::string csvPath, svgPath = "chart.svg", plotTitle;
  plot->add_option("results", csvPath, "results.csv from a run")->required();
  plot->add_option("--out", svgPath, "output svg path (default chart.svg)");
  plot->add_option("--title", plotTitle, "chart title");

  auto* report = app.add_subcommand("report", "summarize a run's json");
  std::string jsonPath;
  report->add_option("summary", jsonPath, "summary.json from a run")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) return cmd_run(configPath, workers, outDir, seed);
  if (list->parsed()) return cmd_list_policies();
  if (plot->parsed()) return cmd_plot(csvPath, svgPath, plotTitle);
  if (report->parsed()) return cmd_report(jsonPath);
  return kExitConfig;
}
