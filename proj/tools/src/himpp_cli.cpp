// Command line front end: train | eval | verify | gradcheck, each taking
// --config <path> [--set key=value ...] --seed <n> --out <dir>.
#include <iostream>

#include <CLI11.hpp>

#include "himpp/harness/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hierarchical message-passing policy trainer"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  long seed = -1;

  std::vector<CLI::App*> subs;
  for (const char* name : {"train", "eval", "verify", "gradcheck"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--set", overrides, "override, repeatable: key=value");
    sub->add_option("--seed", seed, "RNG seed (overrides config)");
    sub->add_option("--out", out_dir, "output directory");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    himpp::RunConfig cfg = himpp::parse_config(config_path, overrides);
    if (seed >= 0) {
      cfg.seed = static_cast<uint64_t>(seed);
      cfg.train.seed = cfg.seed;
    }
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    return himpp::run_command(app.get_subcommands().front()->get_name(), cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
