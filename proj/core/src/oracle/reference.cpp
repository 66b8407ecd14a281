#include "himpp/oracle/reference.hpp"

// Every function here restates the assignment rules from first principles in
// the plainest possible form. Nothing is shared with src/rewards.cpp beyond
// the Rollout container, so agreement between the two paths is meaningful.

namespace himpp::refimpl {

namespace {
using Grid = std::vector<std::vector<double>>;

Grid make_grid(int rows, int cols) {
  return Grid(static_cast<size_t>(rows), std::vector<double>(static_cast<size_t>(cols), 0.0));
}

double ext_at(const Rollout& ro, int t, int w) {
  return ro.ext[static_cast<size_t>(t)][static_cast<size_t>(w)];
}

double sub_value(const Rollout& ro, int k, int w) {
  if (k >= ro.num_sub_boundaries()) return 0.0;
  return ro.value_s[static_cast<size_t>(k)][static_cast<size_t>(w)];
}
}  // namespace

Vec gae(const Vec& rewards, const Vec& values, double gamma, double lambda) {
  // Direct definition: A_t = sum_l (gamma*lambda)^l * delta_{t+l}.
  const int n = static_cast<int>(rewards.size());
  Vec adv(static_cast<size_t>(n), 0.0);
  for (int t = 0; t < n; ++t) {
    double acc = 0.0;
    double weight = 1.0;
    for (int l = 0; t + l < n; ++l) {
      int u = t + l;
      double next_v = u + 1 < n ? values[static_cast<size_t>(u + 1)] : 0.0;
      double delta = rewards[static_cast<size_t>(u)] + gamma * next_v -
                     values[static_cast<size_t>(u)];
      acc += weight * delta;
      weight *= gamma * lambda;
    }
    adv[static_cast<size_t>(t)] = acc;
  }
  return adv;
}

ManagerRewards manager_rewards(const Rollout& ro) {
  const int period = ro.manager_period();
  const int nb = ro.T / period;
  const int cols = ro.levels == 3 ? ro.num_cells : ro.W;
  ManagerRewards out;
  out.r = make_grid(nb, cols);
  out.present.assign(static_cast<size_t>(nb),
                     std::vector<bool>(static_cast<size_t>(cols), false));
  for (int b = 0; b < nb; ++b) {
    for (int c = 0; c < cols; ++c) {
      // collect the member workers at the emission step
      std::vector<int> members;
      if (ro.levels == 3) {
        for (int w = 0; w < ro.W; ++w)
          if (ro.cell[static_cast<size_t>(b * period)][static_cast<size_t>(w)] == c)
            members.push_back(w);
      } else {
        members.push_back(c);
      }
      if (members.empty()) continue;
      double total = 0.0;
      for (int w : members)
        for (int t = b * period; t < (b + 1) * period; ++t)
          total += ext_at(ro, t, w);
      out.r[static_cast<size_t>(b)][static_cast<size_t>(c)] =
          ro.levels == 3 ? total / static_cast<double>(members.size()) : total;
      out.present[static_cast<size_t>(b)][static_cast<size_t>(c)] = true;
    }
  }
  if (ro.T % period != 0) out.dropped_incomplete = cols;
  return out;
}

std::vector<std::vector<double>> manager_advantages(const Rollout& ro,
                                                    const ManagerRewards& mr,
                                                    double gamma_m) {
  const int nb = static_cast<int>(mr.r.size());
  const int cols = nb > 0 ? static_cast<int>(mr.r[0].size()) : 0;
  Grid adv = make_grid(nb, cols);
  for (int b = 0; b < nb; ++b)
    for (int c = 0; c < cols; ++c) {
      if (!mr.present[static_cast<size_t>(b)][static_cast<size_t>(c)]) continue;
      double v_now = ro.value_m[static_cast<size_t>(b)][static_cast<size_t>(c)];
      double v_next = 0.0;
      if (b + 1 < nb)
        v_next = ro.value_m[static_cast<size_t>(b + 1)][static_cast<size_t>(c)];
      adv[static_cast<size_t>(b)][static_cast<size_t>(c)] =
          mr.r[static_cast<size_t>(b)][static_cast<size_t>(c)] + gamma_m * v_next - v_now;
    }
  return adv;
}

std::vector<std::vector<double>> submanager_rewards(
    const Rollout& ro, const std::vector<std::vector<double>>& mgr_adv,
    const RewardFlags& flags) {
  const int nk = ro.num_sub_boundaries();
  Grid out = make_grid(nk, ro.W);
  for (int k = 0; k < nk; ++k)
    for (int w = 0; w < ro.W; ++w) {
      int t0 = k * ro.alpha;
      double local = 0.0;
      for (int i = 0; i < ro.alpha; ++i) local += ext_at(ro, t0 + i, w);
      if (flags.er) {
        out[static_cast<size_t>(k)][static_cast<size_t>(w)] = local;
        continue;
      }
      int supervisor = ro.cell[static_cast<size_t>(t0)][static_cast<size_t>(w)];
      int enclosing = t0 / (ro.K * ro.alpha);
      double adv_share =
          mgr_adv[static_cast<size_t>(enclosing)][static_cast<size_t>(supervisor)] /
          static_cast<double>(ro.K);
      out[static_cast<size_t>(k)][static_cast<size_t>(w)] =
          flags.nl ? adv_share : adv_share + local;
    }
  return out;
}

std::vector<std::vector<double>> submanager_advantages(
    const Rollout& ro, const std::vector<std::vector<double>>& sub_r,
    double gamma_s) {
  const int nk = ro.num_sub_boundaries();
  Grid adv = make_grid(nk, ro.W);
  for (int k = 0; k < nk; ++k)
    for (int w = 0; w < ro.W; ++w)
      adv[static_cast<size_t>(k)][static_cast<size_t>(w)] =
          sub_r[static_cast<size_t>(k)][static_cast<size_t>(w)] +
          gamma_s * sub_value(ro, k + 1, w) - sub_value(ro, k, w);
  return adv;
}

std::vector<std::vector<double>> worker_rewards_static(
    const Rollout& ro, const std::vector<std::vector<double>>& sub_adv,
    const RewardFlags& flags) {
  const int tc = ro.complete_horizon();
  Grid out = make_grid(tc, ro.W);
  for (int t = 0; t < tc; ++t)
    for (int w = 0; w < ro.W; ++w) {
      if (flags.er) {
        out[static_cast<size_t>(t)][static_cast<size_t>(w)] = ext_at(ro, t, w);
        continue;
      }
      double r = sub_adv[static_cast<size_t>(t / ro.alpha)][static_cast<size_t>(w)] /
                 static_cast<double>(ro.alpha);
      if (flags.fl) r = r + ext_at(ro, t, w);
      out[static_cast<size_t>(t)][static_cast<size_t>(w)] = r;
    }
  return out;
}

std::vector<std::vector<double>> worker_rewards_dynamic(
    const Rollout& ro, const std::vector<std::vector<double>>& sub_r,
    const TruncationScheme& scheme, double gamma_s, const RewardFlags& flags) {
  const int tc = ro.complete_horizon();
  Grid out = make_grid(tc, ro.W);
  for (int t = 0; t < tc; ++t)
    for (int w = 0; w < ro.W; ++w) {
      int k = t / ro.alpha;
      double r = sub_r[static_cast<size_t>(k)][static_cast<size_t>(w)];
      if (scheme.variant == TruncationVariant::submanager_scale) {
        bool keep_next = (k + 1) <= scheme.t_star;
        bool keep_now = k <= scheme.t_star;
        if (keep_next) r = r + gamma_s * sub_value(ro, k + 1, w);
        if (keep_now) r = r - sub_value(ro, k, w);
      } else if (scheme.variant == TruncationVariant::worker_scale) {
        bool at_boundary = (t + 1) % ro.alpha == 0;
        double v_next = at_boundary ? sub_value(ro, k + 1, w) : sub_value(ro, k, w);
        if (t + 1 <= scheme.t_star) r = r + gamma_s * v_next;
        if (t <= scheme.t_star) r = r - sub_value(ro, k, w);
      }
      r = r / static_cast<double>(ro.alpha);
      if (flags.fl) r = r + ext_at(ro, t, w);
      if (flags.er) r = ext_at(ro, t, w);
      out[static_cast<size_t>(t)][static_cast<size_t>(w)] = r;
    }
  return out;
}

std::vector<std::vector<double>> worker_rewards_2level(
    const Rollout& ro, const std::vector<std::vector<double>>& mgr_adv,
    const RewardFlags& flags) {
  const int tc = ro.complete_horizon();
  const int period = ro.manager_period();
  Grid out = make_grid(tc, ro.W);
  for (int t = 0; t < tc; ++t)
    for (int w = 0; w < ro.W; ++w) {
      if (flags.er) {
        out[static_cast<size_t>(t)][static_cast<size_t>(w)] = ext_at(ro, t, w);
        continue;
      }
      double r = mgr_adv[static_cast<size_t>(t / period)][static_cast<size_t>(w)] /
                 static_cast<double>(period);
      if (flags.fl) r = r + ext_at(ro, t, w);
      out[static_cast<size_t>(t)][static_cast<size_t>(w)] = r;
    }
  return out;
}

}  // namespace himpp::refimpl
