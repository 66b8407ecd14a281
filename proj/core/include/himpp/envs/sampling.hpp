#pragma once

#include "himpp/envs/env.hpp"

namespace himpp {

// Continuous sampling / coverage task. Robots move in the [-1, 1]^2 arena,
// which is discretized into cells; an episode-specific Gaussian-mixture
// density is drawn at reset, and the first robot to enter a cell collects a
// reward equal to the density mass of that cell. Visited cells pay nothing
// afterwards, so the team has to spread out.
struct SamplingConfig {
  int num_agents = 10;
  int cells = 16;        // cells x cells grid over the arena
  int T = 200;
  int modes = 3;         // mixture components, equal weights
  double mode_sigma = 0.3;
  double mode_span = 0.6;  // component means drawn from U[-span, span]^2
  double max_speed = 0.15;
  double dt = 1.0;
  double comm_range = 0.75;

  static SamplingConfig preset(const std::string& name);
};

class SamplingEnv final : public Env {
 public:
  explicit SamplingEnv(SamplingConfig cfg);

  void reset(Rng& rng) override;
  int num_agents() const override { return cfg_.num_agents; }
  std::vector<Pos> positions() const override;
  RawObs observe(int agent) const override;
  StepResult step(const std::vector<Vec>& actions) override;

  bool discrete_actions() const override { return false; }
  int action_dim() const override { return 2; }
  DistanceMetric metric() const override { return DistanceMetric::euclidean; }
  double comm_range() const override { return cfg_.comm_range; }
  void describe_obs(LatentConfig& cfg) const override;

  // Density mass assigned to a cell (component density at the cell center
  // times the cell area). Exposed for tests.
  double cell_mass(int cx, int cy) const;
  bool visited(int cx, int cy) const;
  int cell_index(double coord) const;
  int steps() const { return t_; }
  const SamplingConfig& config() const { return cfg_; }

  // Test hook: fix the mixture and robot states explicitly.
  void set_state(const std::vector<Pos>& positions,
                 const std::vector<Pos>& velocities,
                 const std::vector<Pos>& mode_means, int t);

 private:
  SamplingConfig cfg_;
  std::vector<double> px_, py_, vx_, vy_;
  std::vector<Pos> means_;
  std::vector<char> visited_;  // cells x cells, row-major
  int t_ = 0;
  bool done_ = true;
};

}  // namespace himpp
