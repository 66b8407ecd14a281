#pragma once

#include "himpp/rewards.hpp"

namespace himpp::refimpl {

// Deliberately naive, loop-based recomputation of the reward assignment and
// GAE, structurally independent of the main rewards module. Used only by
// tests and the verify subcommand.

Vec gae(const Vec& rewards, const Vec& values, double gamma, double lambda);

ManagerRewards manager_rewards(const Rollout& ro);

std::vector<std::vector<double>> manager_advantages(const Rollout& ro,
                                                    const ManagerRewards& mr,
                                                    double gamma_m);

std::vector<std::vector<double>> submanager_rewards(
    const Rollout& ro, const std::vector<std::vector<double>>& mgr_adv,
    const RewardFlags& flags);

std::vector<std::vector<double>> submanager_advantages(
    const Rollout& ro, const std::vector<std::vector<double>>& sub_r,
    double gamma_s);

std::vector<std::vector<double>> worker_rewards_static(
    const Rollout& ro, const std::vector<std::vector<double>>& sub_adv,
    const RewardFlags& flags);

std::vector<std::vector<double>> worker_rewards_dynamic(
    const Rollout& ro, const std::vector<std::vector<double>>& sub_r,
    const TruncationScheme& scheme, double gamma_s, const RewardFlags& flags);

std::vector<std::vector<double>> worker_rewards_2level(
    const Rollout& ro, const std::vector<std::vector<double>>& mgr_adv,
    const RewardFlags& flags);

}  // namespace himpp::refimpl
