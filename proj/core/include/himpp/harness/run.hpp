#pragma once

#include <memory>

#include "himpp/envs/env.hpp"
#include "himpp/harness/config.hpp"
#include "himpp/trainer.hpp"

namespace himpp {

std::unique_ptr<Env> make_env(const RunConfig& cfg);
Model make_model(const RunConfig& cfg, const Env& env);

// Fixed CSV schema for episode logs; one column set for every variant.
extern const char* kEpisodeCsvHeader;

// Writes a replay of `ep` as one structured record per line
// (step, positions, actions, rewards).
void write_replay(const std::string& path, const EpisodeData& ep);

// Dispatch for the CLI subcommands. Returns a process exit status:
//   train     checkpoints + CSV logs + metadata under cfg.out_dir
//   eval      greedy return statistics (loads a checkpoint when present)
//   verify    alignment identities against the brute-force oracle
//   gradcheck finite-difference audit of every head and latent shape
int run_command(const std::string& subcommand, const RunConfig& cfg);

}  // namespace himpp
