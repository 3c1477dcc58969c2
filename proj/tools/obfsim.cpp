// Sweep driver: reads a key-value config, runs the outage sweep, writes CSV.
//
// Exit codes: 0 success, 2 bad arguments, 3 config stage, 4 sweep stage,
// 5 output stage. Each failure prints a diagnostic naming the stage.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "obf/obf.hpp"

int main(int argc, char** argv) {
  CLI::App app{"opportunistic beamforming outage sweep"};
  std::string config_path;
  std::string out_path;
  long long trials = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  app.add_option("--config", config_path, "key-value config file")->required();
  app.add_option("--out", out_path, "output CSV path (default: standard output)");
  auto* trials_opt =
      app.add_option("--trials", trials, "override trials per sweep row");
  auto* seed_opt = app.add_option("--seed", seed, "override the config seed");
  app.add_option("--workers", workers, "worker threads for the estimator")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "arguments: " << e.what() << "\n";
    return 2;
  }
  if (trials_opt->count() > 0 && trials < 1) {
    std::cerr << "arguments: --trials must be at least 1\n";
    return 2;
  }

  obf::SystemParams params;
  try {
    std::ifstream in(config_path);
    if (!in) throw obf::ConfigError("cannot read '" + config_path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    params = obf::parse_config(text.str());
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 3;
  }
  if (trials_opt->count() > 0) params.trials = trials;
  if (seed_opt->count() > 0) params.seed = seed;

  std::vector<obf::SweepRow> rows;
  try {
    rows = obf::run_sweep(params, workers);
  } catch (const std::exception& e) {
    std::cerr << "sweep: " << e.what() << "\n";
    return 4;
  }

  try {
    if (out_path.empty()) {
      obf::emit_csv(rows, std::cout);
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot open '" + out_path + "'");
      obf::emit_csv(rows, out);
    }
  } catch (const std::exception& e) {
    std::cerr << "output: " << e.what() << "\n";
    return 5;
  }
  return 0;
}
