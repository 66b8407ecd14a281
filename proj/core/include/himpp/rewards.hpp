#pragma once

#include "himpp/common.hpp"

namespace himpp {

// One episode of recorded data as the reward engine sees it: external rewards,
// partition snapshots and critic value estimates per level. Entirely
// independent of the network stack so reference implementations can replay it.
struct Rollout {
  int T = 0;       // environment steps taken
  int W = 0;       // workers
  int levels = 3;  // 2 or 3
  int alpha = 1;
  int K = 1;
  int num_cells = 4;  // sub-manager count (3-level)

  std::vector<std::vector<double>> ext;  // ext[t][w]: external reward
  std::vector<std::vector<int>> cell;    // cell[t][w]: supervisor (3-level)

  // Critic snapshots taken at collection time.
  // 3-level: value_m[b][s] at manager boundary b = t/(K*alpha);
  // 2-level: value_m[b][w]. Out-of-range boundaries bootstrap with 0.
  std::vector<std::vector<double>> value_m;
  // value_s[k][w] at sub boundary k = t/alpha, under the then-current
  // supervisor delta_t(w) (3-level only).
  std::vector<std::vector<double>> value_s;

  int manager_period() const { return levels == 2 ? alpha : K * alpha; }
  // Horizon truncated to complete manager intervals; trailing steps of a
  // partial interval produce no training rows.
  int complete_horizon() const { return (T / manager_period()) * manager_period(); }
  int num_manager_boundaries() const { return T / manager_period(); }
  int num_sub_boundaries() const { return complete_horizon() / alpha; }

  void validate() const;
};

// Ablation switches for the assignment scheme.
struct RewardFlags {
  bool fl = false;  // workers additionally see the external reward
  bool nl = false;  // sub-managers lose the local cumulative-reward term
  bool er = false;  // sub-managers and workers use only the external signal
};

enum class TruncationVariant { none, submanager_scale, worker_scale };

// t_star counts sub-manager intervals for the submanager_scale variant and
// environment steps for the worker_scale variant. variant == none drops every
// value term (the no-value ablation) and requires t_star == 0.
struct TruncationScheme {
  TruncationVariant variant = TruncationVariant::worker_scale;
  long t_star = 1;
};

// Manager rewards per (boundary, cell): the mean over the cell's workers --
// frozen at the emission step -- of their external rewards summed over the
// goal interval. Empty cells yield no entry (trajectory discarded).
struct ManagerRewards {
  std::vector<std::vector<double>> r;       // r[b][s] (or [b][w] for 2-level)
  std::vector<std::vector<bool>> present;   // false for discarded entries
  int dropped_incomplete = 0;               // emissions lost to a partial interval
};

ManagerRewards manager_rewards(const Rollout& ro);

// GAE(gamma, lambda) over a finite reward/value sequence; the value after the
// final entry bootstraps with 0.
Vec gae(const Vec& rewards, const Vec& values, double gamma, double lambda);

// GAE(lambda=0) manager advantages on the manager time scale, one stream per
// cell (3-level) or per worker (2-level). Discarded entries get advantage 0.
std::vector<std::vector<double>> manager_advantages(const Rollout& ro,
                                                    const ManagerRewards& mr,
                                                    double gamma_m);

// Sub-manager rewards r^{s->w} per (sub boundary k, worker w): the enclosing
// manager advantage scaled by 1/K plus the worker's local cumulative reward.
std::vector<std::vector<double>> submanager_rewards(
    const Rollout& ro, const std::vector<std::vector<double>>& mgr_adv,
    const RewardFlags& flags);

// GAE(lambda=0) sub-manager advantages per worker stream.
std::vector<std::vector<double>> submanager_advantages(
    const Rollout& ro, const std::vector<std::vector<double>>& sub_r,
    double gamma_s);

// Static-hierarchy worker rewards: the sub-manager advantage split evenly over
// the alpha steps of the goal.
std::vector<std::vector<double>> worker_rewards_static(
    const Rollout& ro, const std::vector<std::vector<double>>& sub_adv,
    const RewardFlags& flags);

// Dynamic-hierarchy advantage-like worker rewards with Iverson-bracket
// truncation over the sequence of future supervisors' value functions.
std::vector<std::vector<double>> worker_rewards_dynamic(
    const Rollout& ro, const std::vector<std::vector<double>>& sub_r,
    const TruncationScheme& scheme, double gamma_s, const RewardFlags& flags);

// 2-level variant: each worker's reward is the manager advantage evaluated on
// that worker's own external-reward stream, split over the goal period.
std::vector<std::vector<double>> worker_rewards_2level(
    const Rollout& ro, const std::vector<std::vector<double>>& mgr_adv,
    const RewardFlags& flags);

}  // namespace himpp
