#pragma once

#include "himpp/nn/net.hpp"

namespace himpp {

// Deterministic standard-deviation schedule shared by every Gaussian head:
// sigma(t) = max(floor, initial - decay * floor(t / decay_every)).
struct StdSchedule {
  double initial = 0.5;
  double decay = 0.05;
  long decay_every = 250000;
  double floor = 0.1;

  double value(long global_step) const {
    double s = initial - decay * static_cast<double>(global_step / decay_every);
    return std::max(floor, s);
  }
};

// Emission predicates for the temporal scales: the manager acts every
// K*alpha steps (alpha in a 2-level hierarchy), sub-managers every alpha,
// workers every step.
struct Schedule {
  int levels = 2;
  int alpha = 5;
  int K = 1;

  int manager_period() const { return levels == 2 ? alpha : K * alpha; }
  bool manager_emits(long t) const { return t % manager_period() == 0; }
  bool submanager_emits(long t) const { return levels == 3 && t % alpha == 0; }
};

enum class HeadKind { gaussian, categorical };

struct ActOut {
  Vec sample;  // goal / pre-squash action, or one-hot index in sample[0]
  double log_prob = 0.0;
  double value = 0.0;
};

// A level's stochastic policy head plus its critic head. Both read the same
// assembled LevelObservation; parameters live under "<prefix>.actor." and
// "<prefix>.critic." so they can be stepped at different learning rates.
class PolicyHead {
 public:
  PolicyHead() = default;
  // mean_hidden/value_hidden empty => linear heads.
  PolicyHead(std::string prefix, HeadKind kind, int obs_dim, int out_dim,
             std::vector<int> mean_hidden = {}, std::vector<int> value_hidden = {});

  void init(ParamStore& ps, Rng& rng);

  int mean_node(Tape& tape, int obs) const { return mean_.apply(tape, obs); }
  int value_node(Tape& tape, int obs) const { return value_.apply(tape, obs); }

  // Samples from the head's distribution; `sigma` is ignored for categorical.
  ActOut act(Tape& tape, int obs, double sigma, Rng& rng) const;
  // Deterministic (greedy) variant: Gaussian mean / categorical argmax.
  ActOut act_greedy(Tape& tape, int obs) const;

  double log_prob(const Vec& mean_or_logits, const Vec& sample, double sigma) const;
  double entropy(const Vec& mean_or_logits, double sigma) const;
  // d log_prob / d (mean or logits) at the realized sample.
  Vec dlogp(const Vec& mean_or_logits, const Vec& sample, double sigma) const;
  // d entropy / d logits (zero vector for Gaussian heads: sigma is scheduled,
  // not learned, so the entropy does not depend on parameters).
  Vec dentropy(const Vec& mean_or_logits, double sigma) const;

  HeadKind kind() const { return kind_; }
  int out_dim() const { return out_dim_; }
  const std::string& prefix() const { return prefix_; }
  std::string actor_prefix() const { return prefix_ + ".actor."; }
  std::string critic_prefix() const { return prefix_ + ".critic."; }
  std::vector<const Mlp*> nets() const { return {&mean_, &value_}; }

 private:
  std::string prefix_;
  HeadKind kind_ = HeadKind::gaussian;
  int obs_dim_ = 0;
  int out_dim_ = 0;
  Mlp mean_;
  Mlp value_;
};

Vec softmax(const Vec& logits);

}  // namespace himpp
