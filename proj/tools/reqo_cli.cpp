// reqo: command-line front end for the REQO simulator.
//
//   reqo dynamics    --config threshold_dynamics.json --out results/
//   reqo qae         --config triangle.json --seed 3
//   reqo reliability --graph graphs/triangle.txt
//
// Exit codes: 0 ok, 2 config/input error, 3 capacity error, 4 consistency error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "reqo/config.hpp"
#include "reqo/errors.hpp"
#include "reqo/harness.hpp"

namespace {

int write_outputs(const std::vector<reqo::OutputFile>& files, const std::string& out_dir) {
  if (out_dir.empty()) {
    for (const auto& f : files) std::cout << "==> " << f.name << " <==\n" << f.content;
    return 0;
  }
  std::filesystem::create_directories(out_dir);
  for (const auto& f : files) {
    const auto path = std::filesystem::path(out_dir) / f.name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw reqo::ConfigError("cannot write " + path.string());
    os << f.content;
    std::cout << path.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"REQO simulator: fixed-point search + amplitude estimation vs. classical Monte-Carlo"};
  app.set_version_flag("--version", reqo::kSoftwareVersion);
  app.require_subcommand(1, 1);

  std::string config_path, out_dir, graph_path;
  std::uint64_t seed = 0;
  int threads = 1;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Master seed (overrides the config)");
    sub->add_option("--out", out_dir, "Output directory (default: stdout)");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 256));
  };
  const std::vector<std::pair<std::string, std::string>> commands{
      {"dynamics", "Per-scenario success curves over the l sweep (CSV + JSON)"},
      {"qae", "Full quantum estimate: search + phase estimation (JSON)"},
      {"classical", "Monte-Carlo sampling with brute-force search (JSON + CSV)"},
      {"compare", "Query-complexity comparison and scaling fit (JSON + CSV)"},
      {"reliability", "Two-terminal reliability of a small graph (JSON)"},
      {"selftest", "Fast invariant suite (JSON); exit 4 on failure"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common(sub);
    if (name == "reliability") sub->add_option("--graph", graph_path, "Edge-list file")->check(CLI::ExistingFile);
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  const bool seed_given = app.get_subcommands().front()->count("--seed") > 0;

  try {
    reqo::ExperimentConfig cfg =
        config_path.empty() ? reqo::ExperimentConfig{} : reqo::ExperimentConfig::load(config_path);
    if (seed_given) cfg.seed = seed;
    reqo::RunOptions opts;
    opts.threads = threads;
    opts.graph_path = graph_path;
    bool passed = true;
    const auto files = reqo::run_command(command, cfg, opts, passed);
    write_outputs(files, out_dir);
    if (!passed) {
      std::cerr << "reqo: selftest failed\n";
      return 4;
    }
    return 0;
  } catch (const reqo::InputError& e) {  // includes DomainError
    std::cerr << "reqo: input error: " << e.what() << "\n";
    return 2;
  } catch (const reqo::ConfigError& e) {
    std::cerr << "reqo: config error: " << e.what() << "\n";
    return 2;
  } catch (const reqo::CapacityError& e) {
    std::cerr << "reqo: capacity error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "reqo: " << e.what() << "\n";
    return 4;
  }
}
