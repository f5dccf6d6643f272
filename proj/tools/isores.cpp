#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "isores/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"isores: resonance experiments on surfaces of revolution"};
  app.require_subcommand(1);

  std::string config;
  isores::RunOptions opt;
  int threads = 0;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for randomized fixtures");
  };
  CLI::App* run = app.add_subcommand("run", "run an experiment and write its artifacts");
  CLI::App* check = app.add_subcommand("check", "run an experiment and assert its acceptance threshold");
  add_common(run);
  add_common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  opt.check = check->parsed();
  CLI::App* used = opt.check ? check : run;
  if (used->count("--threads") > 0) opt.threads = threads;
  if (used->count("--seed") > 0) opt.seed = seed;
  return isores::run_config_file(config, opt, std::cerr);
}
