#pragma once

#include <map>
#include <memory>

#include "himpp/envs/env.hpp"
#include "himpp/policy.hpp"
#include "himpp/rewards.hpp"

namespace himpp {

// Worker communication graph. `distance` follows the environment's proximity
// rule; the fixed shapes ignore positions and wire agents by index.
enum class Topology { distance, star, complete, path, cycle };

struct ModelSpec {
  HierarchySpec hier;   // levels (1 = flat baseline), time scales, partition
  LatentConfig latent;  // embed/rounds/message kind; obs shape from the env
  Topology topology = Topology::distance;
  std::vector<int> actor_hidden = {64};
  std::vector<int> critic_hidden = {64};
  HeadKind worker_head = HeadKind::categorical;
  int action_dim = 0;
};

// The full team: shared latent pipeline plus one policy/critic head per
// hierarchy level. Parameter names partition by owning level:
//   net.w.* / head.w.*  workers
//   net.s.* / head.s.*  sub-managers
//   net.m.* / head.m.*  manager
class Model {
 public:
  Model() = default;
  Model(ModelSpec spec, const Env& env);

  void init(ParamStore& ps, Rng& rng);

  const ModelSpec& spec() const { return spec_; }
  const LatentModel& latent() const { return latent_; }
  const PolicyHead& manager() const { return manager_; }
  const PolicyHead& submanager() const { return submanager_; }
  const PolicyHead& worker() const { return worker_; }
  int levels() const { return spec_.hier.levels; }

  // Prefix groups for per-level, per-role optimizer steps.
  std::vector<std::string> actor_prefixes(const std::string& level) const;
  std::vector<std::string> critic_prefixes(const std::string& level) const;
  std::vector<std::string> level_prefixes(const std::string& level) const;

  // Builds the per-step hierarchy for the given positions, applying the fixed
  // topology override when one is configured.
  HierGraph make_graph(GraphProvider& gp, const std::vector<Pos>& positions) const;

 private:
  ModelSpec spec_;
  LatentModel latent_;
  PolicyHead manager_, submanager_, worker_;
};

struct TrainConfig {
  double gamma = 0.99;       // shared by all levels
  double lam_worker = 0.95;  // GAE lambda for workers; upper levels use 0
  double clip = 0.2;
  double ent_coef = 0.01;
  double value_coef = 0.5;
  int epochs = 30;
  int minibatch = 128;
  int episodes_per_update = 40;
  double lr_actor = 1e-4;
  double lr_critic = 5e-4;
  double grad_clip = 1.0;  // gradients clamped into [-grad_clip, grad_clip]
  StdSchedule sigma;
  RewardFlags flags;
  TruncationScheme trunc;
  uint64_t seed = 0;
};

// One collected episode: everything needed to replay the team forward pass
// exactly during the PPO epochs.
struct EpisodeData {
  std::vector<std::vector<RawObs>> obs;     // [t][w]
  std::vector<std::vector<Pos>> positions;  // [t][w], for replay export
  std::vector<HierGraph> graph;             // [t]
  std::vector<std::vector<Vec>> mgr_goals;  // [t][cell] (3-level) or [t][w]
  std::vector<std::vector<Vec>> sub_goals;  // [t][w] (3-level)
  std::vector<std::vector<Vec>> actions;    // [t][w]
  std::vector<std::vector<double>> logp_w;  // [t][w]
  std::vector<std::vector<double>> value_w; // [t][w]
  std::vector<std::vector<double>> logp_m;  // [boundary][cell or w]
  std::vector<std::vector<double>> logp_s;  // [sub boundary][w] (3-level)
  Rollout ro;                               // ext / cell / critic snapshots
  double sigma = 0.5;                       // exploration std at collection
  double team_return = 0.0;                 // summed external reward
};

struct EpisodeSummary {
  double team_return = 0.0;
  int length = 0;
  // mean assigned reward per level over the episode's training rows
  double reward_manager = 0.0;
  double reward_submanager = 0.0;
  double reward_worker = 0.0;
};

struct UpdateStats {
  std::vector<EpisodeSummary> episodes;
  long env_steps = 0;      // cumulative after this update
  double sigma = 0.5;
  double loss_worker = 0.0;
  double loss_submanager = 0.0;
  double loss_manager = 0.0;
};

// Collect / update loop: PPO with clipped surrogate and entropy bonus at each
// hierarchy level, each level stepping only its own parameters.
class Trainer {
 public:
  Trainer(TrainConfig cfg, Model& model, Env& env, ParamStore& ps);

  // One collection phase followed by per-level PPO epochs.
  UpdateStats iterate();
  // Greedy policy evaluation: mean team return over fresh episodes.
  double evaluate(int episodes);

  long env_steps() const { return env_steps_; }
  EpisodeData collect_episode(bool greedy);

 private:
  struct Sample;   // one decision point for PPO
  struct Targets;  // per-episode advantages and value targets

  Targets compute_targets(const EpisodeData& ep) const;
  double update_level(const std::vector<EpisodeData>& batch,
                      const std::string& level, std::vector<Sample> samples);

  TrainConfig cfg_;
  Model& model_;
  Env& env_;
  ParamStore& ps_;
  Rng env_rng_;
  Rng policy_rng_;
  Rng shuffle_rng_;
  Rng eval_rng_;
  long env_steps_ = 0;
};

// Compares analytic gradients of a composite objective (log-probabilities,
// entropies and critic values of every level over one environment step)
// against central finite differences. Returns the maximum relative error over
// the sampled parameter entries; when `per_group` is given, also reports the
// maximum per parameter group (name prefix up to the second dot).
double gradient_check(Model& model, Env& env, uint64_t seed,
                      int max_entries = 400,
                      std::map<std::string, double>* per_group = nullptr);

}  // namespace himpp
