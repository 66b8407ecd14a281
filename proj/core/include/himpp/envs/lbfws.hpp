#pragma once

#include "himpp/envs/env.hpp"

namespace himpp {

// Level-Based Foraging with Survival. Agents roam a grid collecting food:
// eating yields an immediate individual reward (split evenly when several
// agents cooperate on a high-level item), while carrying an item to the
// central landmark yields no reward but extends the episode's survival
// counter. Consumed items respawn at a random free cell, so extending the
// episode buys more time to collect food.
struct LbfwsConfig {
  int grid = 9;
  int num_agents = 10;
  int food_level1 = 4;  // items of level 1 (value 1)
  int food_level2 = 4;  // items of level 2 (value 2)
  int T = 500;          // absolute step limit
  int T_s = 100;        // initial survival counter
  int k_surv = 10;      // survival increment per delivered value unit
  int sight = 2;        // observation (and communication) range

  // Presets: easy (9x9, 4+4), medium (12x12, 5+5), hard (15x15, 6+6) with 10
  // agents, and a desk-scale mini (5x5, 2 agents, 2 level-1 items, T=150,
  // T_s=60).
  static LbfwsConfig preset(const std::string& name);
};

// Discrete actions, in order.
enum LbfwsAction {
  kNoop = 0, kUp, kDown, kLeft, kRight, kEat, kPick, kDeliver,
  kNumLbfwsActions
};

class LbfwsEnv final : public Env {
 public:
  explicit LbfwsEnv(LbfwsConfig cfg);

  void reset(Rng& rng) override;
  int num_agents() const override { return cfg_.num_agents; }
  std::vector<Pos> positions() const override;
  RawObs observe(int agent) const override;
  StepResult step(const std::vector<Vec>& actions) override;

  bool discrete_actions() const override { return true; }
  int action_dim() const override { return kNumLbfwsActions; }
  DistanceMetric metric() const override { return DistanceMetric::chebyshev; }
  double comm_range() const override { return cfg_.sight; }
  void describe_obs(LatentConfig& cfg) const override;

  // State access for tests and replay export.
  struct Food {
    int x = 0, y = 0;
    int level = 1;
    bool alive = false;  // on the grid (not carried, not consumed)
  };
  int survival() const { return t_s_; }
  int steps() const { return t_; }
  const std::vector<Food>& food() const { return food_; }
  int carried(int agent) const { return carry_[static_cast<size_t>(agent)]; }
  const LbfwsConfig& config() const { return cfg_; }

  // Test hook: place everything explicitly instead of random reset.
  void set_state(const std::vector<Pos>& agents, const std::vector<Food>& food,
                 int t, int t_s);

 private:
  bool occupied(int x, int y, int ignore_agent = -1) const;
  void respawn(int level);
  bool in_grid(int x, int y) const { return x >= 0 && x < cfg_.grid && y >= 0 && y < cfg_.grid; }
  static double food_value(int level) { return static_cast<double>(level); }

  LbfwsConfig cfg_;
  std::vector<int> ax_, ay_;     // agent positions
  std::vector<int> agent_level_;
  std::vector<int> carry_;       // food index being carried, or -1
  std::vector<Food> food_;
  int lx_ = 0, ly_ = 0;          // landmark (grid center)
  int t_ = 0;
  int t_s_ = 0;
  bool done_ = true;
  Rng spawn_rng_{0};             // drives respawn placement, seeded at reset
};

}  // namespace himpp
