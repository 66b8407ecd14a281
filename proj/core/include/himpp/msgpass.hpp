#pragma once

#include <memory>

#include "himpp/hiergraph.hpp"
#include "himpp/nn/net.hpp"

namespace himpp {

// Raw per-agent observation. Grid environments fill both parts (stacked local
// grids plus an auxiliary vector); continuous environments use `vec` only.
struct RawObs {
  Vec grid;
  Vec vec;
};

enum class MsgKind { mlp, gcn };

struct LatentConfig {
  int embed_dim = 64;  // d: embedding and goal dimension
  int rounds = 1;      // L_r message-passing rounds per level
  int msg_hidden = 64;
  MsgKind worker_msg = MsgKind::mlp;
  int levels = 2;

  bool grid_obs = false;
  ConvSpec conv;       // grid observation shape (grid_obs only)
  int aux_dim = 0;     // auxiliary vector length (grid_obs only)
  int vec_obs_dim = 0; // vector observation length (otherwise)

  int goal_dim() const { return embed_dim; }
  int manager_obs_dim() const { return 3 * embed_dim; }
  int sub_obs_dim() const { return goal_dim() + 3 * embed_dim; }
  // levels == 1 is the flat (baseline) case: no goal slot.
  int worker_obs_dim() const {
    return (levels == 1 ? 0 : goal_dim()) + 2 * embed_dim;
  }
};

// Node ids into the step's tape for every latent the policies consume.
struct StepLatent {
  std::unique_ptr<Tape> tape;
  std::vector<int> h_w0, h_wL;  // per worker
  std::vector<int> h_s0, h_sL;  // per sub-manager (3-level)
  int h_m = -1;
  std::vector<int> mgr_obs;  // per sub-manager (3-level) or per worker (2-level)
  std::vector<int> sub_obs;  // per worker (3-level only)
  std::vector<int> worker_obs;  // per worker

  const Vec& value(int id) const { return tape->value(id); }
};

// The latent representation pipeline: encode raw observations, initialize
// upper levels bottom-up, run message-passing rounds per level, and assemble
// the concatenated policy inputs. Weights are shared within each level.
class LatentModel {
 public:
  LatentModel() = default;
  LatentModel(std::string prefix, LatentConfig cfg);

  void init(ParamStore& ps, Rng& rng);

  int encode_worker(Tape& tape, const RawObs& obs) const;
  // Mean over each cell's children (zero vector for empty cells), one-hot tag
  // appended, projected back to the embedding size.
  std::vector<int> bottom_up_submanagers(Tape& tape, const HierGraph& g,
                                         const std::vector<int>& h_w0) const;
  int bottom_up_manager(Tape& tape, const std::vector<int>& h_children) const;
  // One round of h' = UP(h, mean_j MSG(h_i, h_j)) over the given adjacency.
  std::vector<int> propagate_round(Tape& tape, const std::vector<int>& reprs,
                                   const std::vector<std::vector<int>>& adj,
                                   const std::string& level) const;

  // Full pipeline. Goals are realized samples (constants on the tape):
  // 3-level: mgr_goals per sub-manager, sub_goals per worker;
  // 2-level: mgr_goals per worker, sub_goals unused.
  StepLatent run(ParamStore& ps, const HierGraph& g,
                 const std::vector<RawObs>& obs,
                 const std::vector<Vec>& mgr_goals,
                 const std::vector<Vec>& sub_goals) const;

  const LatentConfig& config() const { return cfg_; }
  const std::string& prefix() const { return prefix_; }
  // Parameter name prefixes owned by each hierarchy level; the trainer steps
  // them with the owning level's loss only.
  std::vector<std::string> worker_param_prefixes() const;
  std::vector<std::string> submanager_param_prefixes() const;
  std::vector<std::string> manager_param_prefixes() const;
  // All nets in this pipeline, for the gradient audit.
  std::vector<const Mlp*> nets() const;

 private:
  int msg_node(Tape& tape, const Mlp& net, MsgKind kind, int hi, int hj) const;

  std::string prefix_;
  LatentConfig cfg_;
  Mlp enc_;        // worker encoder (conv+linear or linear)
  Mlp enc_aux_;    // auxiliary-vector encoder (grid_obs only)
  Mlp w_msg_, w_up_;
  Mlp s_init_, s_msg_, s_up_;  // 3-level only
  Mlp m_init_;
};

}  // namespace himpp
