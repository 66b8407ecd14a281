#pragma once

#include "himpp/hiergraph.hpp"
#include "himpp/msgpass.hpp"

namespace himpp {

struct StepResult {
  std::vector<double> rewards;  // per agent
  bool done = false;
};

// Minimal multi-agent environment contract. Step functions are pure given
// (state, actions, rng-stream position); all randomness goes through the Rng
// handed to reset.
class Env {
 public:
  virtual ~Env() = default;

  virtual void reset(Rng& rng) = 0;
  virtual int num_agents() const = 0;
  virtual std::vector<Pos> positions() const = 0;
  virtual RawObs observe(int agent) const = 0;
  virtual StepResult step(const std::vector<Vec>& actions) = 0;

  virtual bool discrete_actions() const = 0;
  virtual int action_dim() const = 0;  // categories, or action vector length
  // Worker-graph construction parameters for this environment.
  virtual DistanceMetric metric() const = 0;
  virtual double comm_range() const = 0;
  // Encoder shape: fills grid_obs/conv/aux_dim or vec_obs_dim.
  virtual void describe_obs(LatentConfig& cfg) const = 0;
};

}  // namespace himpp
