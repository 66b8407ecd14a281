#pragma once

#include <functional>

#include "himpp/common.hpp"

namespace himpp::oracle {

// A tiny finite feudal MDP for brute-force verification of the alignment
// identities. Global state is a single integer; workers share an action set
// and sit in a fixed partition of cells; manager and sub-manager goals are
// symbols from finite alphabets that condition the lower-level policies.
// Evaluation follows the training convention: the hierarchy (here the
// partition) is frozen at t = 0 and the horizon spans complete manager
// periods only.
struct TabularMdp {
  int num_states = 2;
  int num_actions = 2;
  int W = 2;
  std::vector<int> cell_of_worker;  // static partition
  int num_mgr_goals = 2;
  int num_sub_goals = 2;
  int alpha = 1;
  int K = 1;
  int H = 2;  // horizon in manager periods
  int s0 = 0;

  // distribution over next states given (state, joint action)
  std::function<std::vector<std::pair<double, int>>(int, const std::vector<int>&)>
      transition;
  // external reward of worker w for (state, joint action, next state)
  std::function<double(int, int, const std::vector<int>&, int)> reward;

  int num_cells() const;
  int steps() const { return H * K * alpha; }
  void validate() const;
};

// One tabular policy per level. Manager and sub-manager rules are shared
// across cells / workers; the worker rule may depend on the worker index,
// which is how the non-homogeneous counterexample breaks Theorem 1.
struct LevelPolicies {
  std::function<Vec(int state)> mgr;              // P(goal | state)
  std::function<Vec(int state, int gm)> sub;      // P(goal | state, mgr goal)
  std::function<Vec(int w, int state, int gs)> wrk;  // P(action | ...)
};

struct AlignmentReport {
  double eta = 0.0;    // per-worker global objective (mean over workers)
  Vec eta_per_worker;
  double eta_m = 0.0;  // manager return summed over non-empty cells
  double eta_s = 0.0;  // sub-manager return, mean over workers
  double eta_w = 0.0;  // worker return, mean over workers
  double eta_old = 0.0;
  double eta_s_old = 0.0;
  double eta_adv = 0.0;
  double k_m = 0.0;  // non-empty cells in the frozen partition
  double k_s = 0.0;
  double k_w = 0.0;
  bool homogeneous = true;
  double thm1_residual = 0.0;   // eta_m - k_m * eta
  double lemma_residual = 0.0;  // eta - eta_old - eta_adv / k_m
  double thm2_residual = 0.0;   // eta_s - (k_s eta_adv + eta_old)
  double thm3_residual = 0.0;   // eta_w - k_w (k_s eta_adv + eta_old - eta_s_old)
  long paths = 0;  // enumerated trajectory branches
};

// Exact enumeration of eta, eta_m and the Theorem 1 residual.
AlignmentReport evaluate_policy(const TabularMdp& mdp, const LevelPolicies& pi,
                                double gamma);

// Lemma 1 with an updated manager: pi = (old worker, old sub, new manager).
// Advantages use time-indexed value functions of the old joint policy, so the
// telescoping identity is exact over the finite horizon.
AlignmentReport verify_lemma1(const TabularMdp& mdp,
                              const LevelPolicies& pi_new,
                              const LevelPolicies& pi_old, double gamma);

// Theorem 2 with an updated sub-manager: pi_hat_s = (old, new sub, old).
// Exact at K = 1 with equal-sized cells; approximate otherwise.
AlignmentReport verify_theorem2(const TabularMdp& mdp,
                                const LevelPolicies& pi_new,
                                const LevelPolicies& pi_old, double gamma);

// Theorem 3 with an updated worker: pi_hat_w = (new worker, old, old).
// Requires K = 1 so the sub-manager value recursion stays Markovian; exact at
// alpha = 1, approximate for alpha > 1.
AlignmentReport verify_theorem3(const TabularMdp& mdp,
                                const LevelPolicies& pi_new,
                                const LevelPolicies& pi_old, double gamma);

// Monte-Carlo estimate of eta for cross-checking the enumeration.
double monte_carlo_eta(const TabularMdp& mdp, const LevelPolicies& pi,
                       double gamma, int episodes, uint64_t seed);

// Bundled toy problems.
TabularMdp toy_two_cells();                     // 2 workers, 1 per cell
TabularMdp toy_four_workers();                  // 4 workers, 2 per cell, stochastic
TabularMdp toy_deep();                          // H = 4 periods of K*alpha = 2 steps
TabularMdp toy_periodic(int K, int alpha);      // scales for the residual sweeps
TabularMdp toy_nonhomogeneous();                // breaks worker homogeneity
LevelPolicies uniform_policies(const TabularMdp& mdp);
// Uniform policies tilted by eps toward the higher-indexed symbol; serves as
// the "new" policy against a uniform "old" one.
LevelPolicies tilted_policies(const TabularMdp& mdp, double eps);

}  // namespace himpp::oracle
