#include "himpp/rewards.hpp"

namespace himpp {

void Rollout::validate() const {
  HIMPP_CHECK(levels == 2 || levels == 3, "rollout levels");
  HIMPP_CHECK(alpha >= 1 && K >= 1, "rollout time scales");
  HIMPP_CHECK(static_cast<int>(ext.size()) == T, "ext rows");
  for (const auto& row : ext)
    HIMPP_CHECK(static_cast<int>(row.size()) == W, "ext cols");
  if (levels == 3) {
    HIMPP_CHECK(static_cast<int>(cell.size()) == T, "cell rows");
    for (const auto& row : cell)
      for (int c : row)
        HIMPP_CHECK(c >= 0 && c < num_cells, "cell index range");
  }
}

ManagerRewards manager_rewards(const Rollout& ro) {
  ro.validate();
  const int period = ro.manager_period();
  const int nb = ro.num_manager_boundaries();
  const int cols = ro.levels == 3 ? ro.num_cells : ro.W;
  ManagerRewards out;
  out.r.assign(static_cast<size_t>(nb), std::vector<double>(static_cast<size_t>(cols), 0.0));
  out.present.assign(static_cast<size_t>(nb), std::vector<bool>(static_cast<size_t>(cols), false));
  for (int b = 0; b < nb; ++b) {
    const int t0 = b * period;
    if (ro.levels == 3) {
      // partition frozen at the emission step
      for (int s = 0; s < ro.num_cells; ++s) {
        double sum = 0.0;
        int count = 0;
        for (int w = 0; w < ro.W; ++w) {
          if (ro.cell[static_cast<size_t>(t0)][static_cast<size_t>(w)] != s) continue;
          ++count;
          for (int k = 0; k < period; ++k)
            sum += ro.ext[static_cast<size_t>(t0 + k)][static_cast<size_t>(w)];
        }
        if (count > 0) {
          out.r[static_cast<size_t>(b)][static_cast<size_t>(s)] = sum / count;
          out.present[static_cast<size_t>(b)][static_cast<size_t>(s)] = true;
        }
      }
    } else {
      for (int w = 0; w < ro.W; ++w) {
        double sum = 0.0;
        for (int k = 0; k < period; ++k)
          sum += ro.ext[static_cast<size_t>(t0 + k)][static_cast<size_t>(w)];
        out.r[static_cast<size_t>(b)][static_cast<size_t>(w)] = sum;
        out.present[static_cast<size_t>(b)][static_cast<size_t>(w)] = true;
      }
    }
  }
  if (ro.T % period != 0) {
    // trailing partial interval: one dropped emission per column
    out.dropped_incomplete = cols;
  }
  return out;
}

Vec gae(const Vec& rewards, const Vec& values, double gamma, double lambda) {
  HIMPP_CHECK(rewards.size() == values.size(), "gae sequence lengths");
  const int n = static_cast<int>(rewards.size());
  Vec adv(static_cast<size_t>(n), 0.0);
  double running = 0.0;
  for (int t = n - 1; t >= 0; --t) {
    double next_v = t + 1 < n ? values[static_cast<size_t>(t + 1)] : 0.0;
    double delta = rewards[static_cast<size_t>(t)] + gamma * next_v -
                   values[static_cast<size_t>(t)];
    running = delta + gamma * lambda * running;
    adv[static_cast<size_t>(t)] = running;
  }
  return adv;
}

std::vector<std::vector<double>> manager_advantages(const Rollout& ro,
                                                    const ManagerRewards& mr,
                                                    double gamma_m) {
  const int nb = ro.num_manager_boundaries();
  const int cols = ro.levels == 3 ? ro.num_cells : ro.W;
  HIMPP_CHECK(static_cast<int>(ro.value_m.size()) >= nb, "manager values per boundary");
  std::vector<std::vector<double>> adv(
      static_cast<size_t>(nb), std::vector<double>(static_cast<size_t>(cols), 0.0));
  for (int c = 0; c < cols; ++c) {
    for (int b = 0; b < nb; ++b) {
      if (!mr.present[static_cast<size_t>(b)][static_cast<size_t>(c)]) continue;
      double next_v = b + 1 < nb
                          ? ro.value_m[static_cast<size_t>(b + 1)][static_cast<size_t>(c)]
                          : 0.0;
      adv[static_cast<size_t>(b)][static_cast<size_t>(c)] =
          mr.r[static_cast<size_t>(b)][static_cast<size_t>(c)] + gamma_m * next_v -
          ro.value_m[static_cast<size_t>(b)][static_cast<size_t>(c)];
    }
  }
  return adv;
}

std::vector<std::vector<double>> submanager_rewards(
    const Rollout& ro, const std::vector<std::vector<double>>& mgr_adv,
    const RewardFlags& flags) {
  HIMPP_CHECK(ro.levels == 3, "sub-manager rewards need a 3-level hierarchy");
  const int nk = ro.num_sub_boundaries();
  std::vector<std::vector<double>> out(
      static_cast<size_t>(nk), std::vector<double>(static_cast<size_t>(ro.W), 0.0));
  for (int k = 0; k < nk; ++k) {
    const int t0 = k * ro.alpha;
    const int b = t0 / (ro.K * ro.alpha);
    HIMPP_CHECK(b < static_cast<int>(mgr_adv.size()), "missing enclosing manager interval");
    for (int w = 0; w < ro.W; ++w) {
      const int s = ro.cell[static_cast<size_t>(t0)][static_cast<size_t>(w)];
      double local = 0.0;
      for (int i = 0; i < ro.alpha; ++i)
        local += ro.ext[static_cast<size_t>(t0 + i)][static_cast<size_t>(w)];
      double r;
      if (flags.er) {
        r = local;
      } else {
        r = mgr_adv[static_cast<size_t>(b)][static_cast<size_t>(s)] / ro.K;
        if (!flags.nl) r += local;
      }
      out[static_cast<size_t>(k)][static_cast<size_t>(w)] = r;
    }
  }
  return out;
}

std::vector<std::vector<double>> submanager_advantages(
    const Rollout& ro, const std::vector<std::vector<double>>& sub_r,
    double gamma_s) {
  const int nk = ro.num_sub_boundaries();
  HIMPP_CHECK(static_cast<int>(ro.value_s.size()) >= nk, "sub values per boundary");
  std::vector<std::vector<double>> adv(
      static_cast<size_t>(nk), std::vector<double>(static_cast<size_t>(ro.W), 0.0));
  for (int w = 0; w < ro.W; ++w) {
    for (int k = 0; k < nk; ++k) {
      double next_v = k + 1 < nk
                          ? ro.value_s[static_cast<size_t>(k + 1)][static_cast<size_t>(w)]
                          : 0.0;
      adv[static_cast<size_t>(k)][static_cast<size_t>(w)] =
          sub_r[static_cast<size_t>(k)][static_cast<size_t>(w)] + gamma_s * next_v -
          ro.value_s[static_cast<size_t>(k)][static_cast<size_t>(w)];
    }
  }
  return adv;
}

std::vector<std::vector<double>> worker_rewards_static(
    const Rollout& ro, const std::vector<std::vector<double>>& sub_adv,
    const RewardFlags& flags) {
  const int tc = ro.complete_horizon();
  std::vector<std::vector<double>> out(
      static_cast<size_t>(tc), std::vector<double>(static_cast<size_t>(ro.W), 0.0));
  for (int t = 0; t < tc; ++t) {
    const int k = t / ro.alpha;
    for (int w = 0; w < ro.W; ++w) {
      double r;
      if (flags.er) {
        r = ro.ext[static_cast<size_t>(t)][static_cast<size_t>(w)];
      } else {
        r = sub_adv[static_cast<size_t>(k)][static_cast<size_t>(w)] / ro.alpha;
        if (flags.fl) r += ro.ext[static_cast<size_t>(t)][static_cast<size_t>(w)];
      }
      out[static_cast<size_t>(t)][static_cast<size_t>(w)] = r;
    }
  }
  return out;
}

std::vector<std::vector<double>> worker_rewards_dynamic(
    const Rollout& ro, const std::vector<std::vector<double>>& sub_r,
    const TruncationScheme& scheme, double gamma_s, const RewardFlags& flags) {
  HIMPP_CHECK(ro.levels == 3, "dynamic worker rewards need a 3-level hierarchy");
  HIMPP_CHECK(scheme.variant != TruncationVariant::none || scheme.t_star == 0,
              "variant=none drops all value terms and requires t_star=0");
  const int tc = ro.complete_horizon();
  const int nk = ro.num_sub_boundaries();
  std::vector<std::vector<double>> out(
      static_cast<size_t>(tc), std::vector<double>(static_cast<size_t>(ro.W), 0.0));
  auto vs = [&](int k, int w) -> double {
    if (k >= nk) return 0.0;
    return ro.value_s[static_cast<size_t>(k)][static_cast<size_t>(w)];
  };
  for (int t = 0; t < tc; ++t) {
    const int k = t / ro.alpha;
    for (int w = 0; w < ro.W; ++w) {
      double r = sub_r[static_cast<size_t>(k)][static_cast<size_t>(w)];
      switch (scheme.variant) {
        case TruncationVariant::none:
          break;
        case TruncationVariant::submanager_scale:
          // value index advances per sub interval; t_star in interval units
          if (k + 1 <= scheme.t_star) r += gamma_s * vs(k + 1, w);
          if (k <= scheme.t_star) r -= vs(k, w);
          break;
        case TruncationVariant::worker_scale: {
          // value index advances per step; the supervisor observation (and
          // hence the value) swaps only at alpha boundaries
          double next_v = ((t + 1) % ro.alpha == 0) ? vs(k + 1, w) : vs(k, w);
          if (t + 1 <= scheme.t_star) r += gamma_s * next_v;
          if (t <= scheme.t_star) r -= vs(k, w);
          break;
        }
      }
      r /= ro.alpha;
      if (flags.fl) r += ro.ext[static_cast<size_t>(t)][static_cast<size_t>(w)];
      if (flags.er) r = ro.ext[static_cast<size_t>(t)][static_cast<size_t>(w)];
      out[static_cast<size_t>(t)][static_cast<size_t>(w)] = r;
    }
  }
  return out;
}

std::vector<std::vector<double>> worker_rewards_2level(
    const Rollout& ro, const std::vector<std::vector<double>>& mgr_adv,
    const RewardFlags& flags) {
  HIMPP_CHECK(ro.levels == 2, "2-level worker rewards need a 2-level hierarchy");
  const int tc = ro.complete_horizon();
  const int period = ro.manager_period();
  std::vector<std::vector<double>> out(
      static_cast<size_t>(tc), std::vector<double>(static_cast<size_t>(ro.W), 0.0));
  for (int t = 0; t < tc; ++t) {
    const int b = t / period;
    for (int w = 0; w < ro.W; ++w) {
      double r;
      if (flags.er) {
        r = ro.ext[static_cast<size_t>(t)][static_cast<size_t>(w)];
      } else {
        r = mgr_adv[static_cast<size_t>(b)][static_cast<size_t>(w)] / period;
        if (flags.fl) r += ro.ext[static_cast<size_t>(t)][static_cast<size_t>(w)];
      }
      out[static_cast<size_t>(t)][static_cast<size_t>(w)] = r;
    }
  }
  return out;
}

}  // namespace himpp
