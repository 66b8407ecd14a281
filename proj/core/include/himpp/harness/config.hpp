#pragma once

#include <string>
#include <vector>

#include "himpp/trainer.hpp"

namespace himpp {

// Everything a run needs, resolved from a key=value config file plus command
// line overrides. Variant defaults are applied first, then file keys, then
// overrides, so a config can partially re-tune a baseline.
//
// Desk-scale note: sigma_decay_every defaults to budget/8, which walks the
// exploration std from 0.5 down to the 0.1 floor across the whole run; set it
// explicitly to pin the paper-scale 2.5e5 schedule.
struct RunConfig {
  // environment
  std::string env = "lbfws";    // lbfws | sampling
  std::string preset = "mini";  // per-environment preset name

  // model variant and hierarchy
  std::string variant = "himppo";  // himppo | ippo | gppo-flat | gppo-star |
                                   // gppo-complete | gppo-path | gppo-cycle
  int levels = 2;
  int alpha = 5;
  int K = 1;
  bool dynamic = false;  // rebuild the hierarchy every step

  // reward scheme switches
  bool fl = false;  // add local external reward to the worker stream
  bool nl = false;  // drop the local term from the sub-manager stream
  bool er = false;  // external rewards only below the manager
  bool nv = false;  // no value terms in the dynamic worker reward (t* = 0)
  std::string truncation = "none";  // none | (T_s, t*) | (T_w, t*)

  // latent / heads
  int embed_dim = 64;
  int rounds = 1;
  std::string msg = "mlp";  // mlp | gcn
  int actor_hidden = 64;
  int critic_hidden = 64;

  TrainConfig train;

  // run shape
  long budget = 200000;      // total environment steps
  int eval_every = 1;        // updates between greedy evaluations
  int eval_episodes = 4;
  int checkpoint_every = 10; // updates between checkpoints (0 = final only)

  uint64_t seed = 0;
  std::string out_dir = "run_out";

  // resolved key=value pairs, in canonical order, for the verbatim dump
  std::vector<std::pair<std::string, std::string>> resolved() const;
  std::string resolved_text() const;
  uint64_t config_hash() const;
};

// Raised on unknown keys, malformed values or conflicting variant flags.
struct ConfigError : StructuralError {
  using StructuralError::StructuralError;
};

// Parses `path` (empty string = all defaults) and applies `key=value`
// overrides on top. Unknown keys are errors; selecting a flat variant while
// also setting hierarchy keys is an error naming both keys.
RunConfig parse_config(const std::string& path,
                       const std::vector<std::string>& overrides);

// "(T_w, 1)" -> worker-scale scheme with t* = 1; "(T_s, n)" -> sub-manager
// scale; "none" -> no value terms, t* = 0.
TruncationScheme parse_truncation(const std::string& text);

// Fills TrainConfig flag/truncation/seed fields and variant-dependent
// defaults; returns the fully resolved config.
RunConfig finalize(RunConfig cfg);

}  // namespace himpp
