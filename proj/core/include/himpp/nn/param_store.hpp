#pragma once

#include <map>
#include <string>

#include "himpp/common.hpp"

namespace himpp {

// One learnable tensor: a (rows x cols) matrix, or a vector when cols == 0.
// Gradient accumulator and Adam moments always share the value's shape.
struct Param {
  Vec value;
  Vec grad;
  Vec m;  // Adam first moment
  Vec v;  // Adam second moment
  int rows = 0;
  int cols = 0;     // 0 => plain vector of length `rows`
  long steps = 0;   // per-parameter Adam step, drives bias correction

  size_t size() const { return value.size(); }
};

// Named parameter collection with gradient accumulators and Adam state.
// Iteration order is the lexicographic name order (std::map), which keeps
// optimizer sweeps and checkpoints deterministic.
class ParamStore {
 public:
  // Creates a (rows x cols) matrix initialized uniformly in
  // [-1/sqrt(fan_in), 1/sqrt(fan_in)] with fan_in = cols.
  Param& add_matrix(const std::string& name, int rows, int cols, Rng& rng);
  // Creates a vector of the given length, zero-initialized unless fill given.
  Param& add_vector(const std::string& name, int len, double fill = 0.0);
  // Vector initialized uniformly in [-bound, bound] (bias initialization:
  // keeps pre-activations off the relu kink even on all-zero inputs).
  Param& add_vector(const std::string& name, int len, Rng& rng, double bound);

  Param& at(const std::string& name);
  const Param& at(const std::string& name) const;
  bool contains(const std::string& name) const { return params_.count(name) > 0; }

  void zero_grad();
  long step_count() const { return step_; }

  std::map<std::string, Param>& params() { return params_; }
  const std::map<std::string, Param>& params() const { return params_; }

  // Standard Adam with bias correction over every parameter. Resets gradient
  // accumulators and increments the step counter. Throws on non-finite
  // gradients, naming the offending parameter.
  void adam_step(double lr, double beta1 = 0.9, double beta2 = 0.999,
                 double eps = 1e-8);
  // Same update restricted to parameters whose name starts with one of the
  // given prefixes. Used by the trainer to step one hierarchy level (or one
  // actor/critic group) at its own learning rate without touching the rest.
  void adam_step_prefixed(const std::vector<std::string>& prefixes, double lr,
                          double beta1 = 0.9, double beta2 = 0.999,
                          double eps = 1e-8);

  // Clamp every gradient entry into [lo, hi].
  void gradient_clip(double lo, double hi);

  // Versioned binary dump / restore of values, moments, and the step counter.
  void save(const std::string& path) const;
  void load(const std::string& path);

 private:
  void adam_update_param(const std::string& name, Param& p, double lr,
                         double beta1, double beta2, double eps, long t);

  std::map<std::string, Param> params_;
  long step_ = 0;
};

}  // namespace himpp
