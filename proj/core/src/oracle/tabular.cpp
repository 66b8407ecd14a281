#include "himpp/oracle/tabular.hpp"

#include <algorithm>
#include <map>

namespace himpp::oracle {

namespace {

constexpr long kPathBound = 20'000'000;

double geom_mean_coeff(double gamma, int n) {
  // (1 - gamma^n) / (n (1 - gamma)), with the limit 1 at gamma -> 1
  if (std::fabs(1.0 - gamma) < 1e-12) return 1.0;
  return (1.0 - std::pow(gamma, n)) / (n * (1.0 - gamma));
}

struct Traj {
  std::vector<int> states;                  // length steps + 1
  std::vector<std::vector<int>> mgr_goals;  // [boundary][cell]
  std::vector<std::vector<int>> sub_goals;  // [sub boundary][w]
  std::vector<std::vector<double>> ext;     // [t][w]
};

void enum_product(const std::vector<Vec>& dists, size_t i, std::vector<int>& pick,
                  double p,
                  const std::function<void(const std::vector<int>&, double)>& cb) {
  if (i == dists.size()) {
    cb(pick, p);
    return;
  }
  for (size_t g = 0; g < dists[i].size(); ++g) {
    if (dists[i][g] <= 0.0) continue;
    pick[i] = static_cast<int>(g);
    enum_product(dists, i + 1, pick, p * dists[i][g], cb);
  }
}

// Exhaustive trajectory enumeration from mdp.s0 over mdp.steps() steps.
struct Walker {
  const TabularMdp& mdp;
  const LevelPolicies& pi;
  std::function<void(const Traj&, double)> leaf;
  long paths = 0;
  Traj traj;

  void run() {
    traj = Traj{};
    traj.states.push_back(mdp.s0);
    step(0, 1.0);
  }

  void step(int t, double p) {
    if (t == mdp.steps()) {
      ++paths;
      HIMPP_CHECK(paths <= kPathBound, "trajectory enumeration bound exceeded");
      leaf(traj, p);
      return;
    }
    const int state = traj.states.back();

    auto do_actions = [&](double p1) {
      std::vector<Vec> adist(static_cast<size_t>(mdp.W));
      const std::vector<int>& gs = traj.sub_goals.back();
      for (int w = 0; w < mdp.W; ++w)
        adist[static_cast<size_t>(w)] =
            pi.wrk(w, state, gs[static_cast<size_t>(w)]);
      std::vector<int> apick(static_cast<size_t>(mdp.W));
      enum_product(adist, 0, apick, p1, [&](const std::vector<int>& act, double p2) {
        for (const auto& [tp, ns] : mdp.transition(state, act)) {
          if (tp <= 0.0) continue;
          std::vector<double> row(static_cast<size_t>(mdp.W));
          for (int w = 0; w < mdp.W; ++w)
            row[static_cast<size_t>(w)] = mdp.reward(w, state, act, ns);
          traj.ext.push_back(std::move(row));
          traj.states.push_back(ns);
          step(t + 1, p2 * tp);
          traj.states.pop_back();
          traj.ext.pop_back();
        }
      });
    };

    auto do_sub = [&](double p1) {
      if (t % mdp.alpha != 0) {
        do_actions(p1);
        return;
      }
      std::vector<Vec> sdist(static_cast<size_t>(mdp.W));
      const std::vector<int>& gm = traj.mgr_goals.back();
      for (int w = 0; w < mdp.W; ++w)
        sdist[static_cast<size_t>(w)] = pi.sub(
            state, gm[static_cast<size_t>(mdp.cell_of_worker[static_cast<size_t>(w)])]);
      std::vector<int> spick(static_cast<size_t>(mdp.W));
      enum_product(sdist, 0, spick, p1, [&](const std::vector<int>& gs, double p2) {
        traj.sub_goals.push_back(gs);
        do_actions(p2);
        traj.sub_goals.pop_back();
      });
    };

    if (t % (mdp.K * mdp.alpha) == 0) {
      const int C = mdp.num_cells();
      std::vector<Vec> mdist(static_cast<size_t>(C), pi.mgr(state));
      std::vector<int> mpick(static_cast<size_t>(C));
      enum_product(mdist, 0, mpick, p, [&](const std::vector<int>& gm, double p2) {
        traj.mgr_goals.push_back(gm);
        do_sub(p2);
        traj.mgr_goals.pop_back();
      });
    } else {
      do_sub(p);
    }
  }
};

std::vector<std::vector<int>> cell_members(const TabularMdp& mdp) {
  std::vector<std::vector<int>> cells(static_cast<size_t>(mdp.num_cells()));
  for (int w = 0; w < mdp.W; ++w)
    cells[static_cast<size_t>(mdp.cell_of_worker[static_cast<size_t>(w)])].push_back(w);
  return cells;
}

// Realized manager reward at boundary b: per-cell mean of the members'
// external rewards over the period. Empty cells are absent (flagged by NaN
// avoidance: the caller skips them via the members list).
Vec period_rewards(const TabularMdp& mdp, const Traj& traj, int b,
                   const std::vector<std::vector<int>>& cells) {
  const int period = mdp.K * mdp.alpha;
  Vec r(cells.size(), 0.0);
  for (size_t s = 0; s < cells.size(); ++s) {
    if (cells[s].empty()) continue;
    double sum = 0.0;
    for (int w : cells[s])
      for (int t = b * period; t < (b + 1) * period; ++t)
        sum += traj.ext[static_cast<size_t>(t)][static_cast<size_t>(w)];
    r[s] = sum / static_cast<double>(cells[s].size());
  }
  return r;
}

// Time-indexed per-cell manager values under a fixed joint policy:
// V[b](state)[s] = E[ r_b(s) + gamma * V[b+1](state')[s] ].
class ManagerValues {
 public:
  ManagerValues(const TabularMdp& mdp, const LevelPolicies& pi, double gamma)
      : mdp_(mdp), pi_(pi), gamma_(gamma), cells_(cell_members(mdp)) {}

  const Vec& get(int state, int b) {
    auto key = std::make_pair(state, b);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Vec acc(cells_.size(), 0.0);
    if (b < mdp_.H) {
      TabularMdp one = mdp_;
      one.H = 1;
      one.s0 = state;
      Walker wk{one, pi_, nullptr};
      wk.leaf = [&](const Traj& traj, double p) {
        Vec r = period_rewards(mdp_, traj, 0, cells_);
        const Vec& next = get(traj.states.back(), b + 1);
        for (size_t s = 0; s < acc.size(); ++s) {
          if (cells_[s].empty()) continue;
          acc[s] += p * (r[s] + gamma_ * next[s]);
        }
      };
      wk.run();
    }
    return memo_.emplace(key, std::move(acc)).first->second;
  }

  const std::vector<std::vector<int>>& cells() const { return cells_; }

 private:
  const TabularMdp& mdp_;
  const LevelPolicies& pi_;
  double gamma_;
  std::vector<std::vector<int>> cells_;
  std::map<std::pair<int, int>, Vec> memo_;
};

// Time-indexed per-worker sub-manager values under a fixed joint policy.
// Only defined for K = 1, where every manager period is one sub interval and
// the realized manager advantage is a function of that period alone.
class SubValues {
 public:
  SubValues(const TabularMdp& mdp, const LevelPolicies& pi, double gamma,
            ManagerValues& vm)
      : mdp_(mdp), pi_(pi), gamma_(gamma), vm_(vm) {
    HIMPP_CHECK(mdp.K == 1, "sub-manager values require K = 1");
  }

  const Vec& get(int state, int b) {
    auto key = std::make_pair(state, b);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Vec acc(static_cast<size_t>(mdp_.W), 0.0);
    if (b < mdp_.H) {
      const Vec& v_now = vm_.get(state, b);
      TabularMdp one = mdp_;
      one.H = 1;
      one.s0 = state;
      Walker wk{one, pi_, nullptr};
      wk.leaf = [&](const Traj& traj, double p) {
        Vec r = period_rewards(mdp_, traj, 0, vm_.cells());
        const int next_state = traj.states.back();
        const Vec& v_next = vm_.get(next_state, b + 1);
        const Vec& vs_next = get(next_state, b + 1);
        for (int w = 0; w < mdp_.W; ++w) {
          const size_t s = static_cast<size_t>(
              mdp_.cell_of_worker[static_cast<size_t>(w)]);
          double adv = r[s] + gamma_ * v_next[s] - v_now[s];
          double local = 0.0;
          for (int t = 0; t < mdp_.alpha; ++t)
            local += traj.ext[static_cast<size_t>(t)][static_cast<size_t>(w)];
          acc[static_cast<size_t>(w)] +=
              p * (adv + local + gamma_ * vs_next[static_cast<size_t>(w)]);
        }
      };
      wk.run();
    }
    return memo_.emplace(key, std::move(acc)).first->second;
  }

 private:
  const TabularMdp& mdp_;
  const LevelPolicies& pi_;
  double gamma_;
  ManagerValues& vm_;
  std::map<std::pair<int, int>, Vec> memo_;
};

}  // namespace

int TabularMdp::num_cells() const {
  int c = 0;
  for (int v : cell_of_worker) c = std::max(c, v + 1);
  return c;
}

void TabularMdp::validate() const {
  HIMPP_CHECK(num_states >= 1 && num_actions >= 1 && W >= 1, "mdp sizes");
  HIMPP_CHECK(static_cast<int>(cell_of_worker.size()) == W, "partition size");
  HIMPP_CHECK(alpha >= 1 && K >= 1 && H >= 1, "mdp time scales");
  HIMPP_CHECK(transition && reward, "mdp dynamics");
}

AlignmentReport evaluate_policy(const TabularMdp& mdp, const LevelPolicies& pi,
                                double gamma) {
  mdp.validate();
  AlignmentReport rep;
  rep.eta_per_worker.assign(static_cast<size_t>(mdp.W), 0.0);
  auto cells = cell_members(mdp);
  for (const auto& c : cells)
    if (!c.empty()) rep.k_m += 1.0;

  const int period = mdp.K * mdp.alpha;
  Walker wk{mdp, pi, nullptr};
  wk.leaf = [&](const Traj& traj, double p) {
    for (int b = 0; b < mdp.H; ++b) {
      const double disc = std::pow(gamma, b);
      for (int w = 0; w < mdp.W; ++w) {
        double sum = 0.0;
        for (int t = b * period; t < (b + 1) * period; ++t)
          sum += traj.ext[static_cast<size_t>(t)][static_cast<size_t>(w)];
        rep.eta_per_worker[static_cast<size_t>(w)] += p * disc * sum;
      }
      Vec r = period_rewards(mdp, traj, b, cells);
      for (size_t s = 0; s < cells.size(); ++s)
        if (!cells[s].empty()) rep.eta_m += p * disc * r[s];
    }
  };
  wk.run();
  rep.paths = wk.paths;

  for (double e : rep.eta_per_worker) rep.eta += e;
  rep.eta /= static_cast<double>(mdp.W);
  double spread = 0.0;
  for (double e : rep.eta_per_worker)
    spread = std::max(spread, std::fabs(e - rep.eta));
  rep.homogeneous = spread <= 1e-9 * std::max(1.0, std::fabs(rep.eta));
  rep.thm1_residual = rep.eta_m - rep.k_m * rep.eta;
  return rep;
}

namespace {

// eta_adv under the composed policy pi, with advantages taken w.r.t. the
// time-indexed manager values of pi_old.
double eta_adv_under(const TabularMdp& mdp, const LevelPolicies& pi,
                     const LevelPolicies& pi_old, double gamma, long& paths) {
  ManagerValues vm(mdp, pi_old, gamma);
  auto cells = cell_members(mdp);
  const int period = mdp.K * mdp.alpha;
  double acc = 0.0;
  Walker wk{mdp, pi, nullptr};
  wk.leaf = [&](const Traj& traj, double p) {
    for (int b = 0; b < mdp.H; ++b) {
      Vec r = period_rewards(mdp, traj, b, cells);
      const Vec& v_now = vm.get(traj.states[static_cast<size_t>(b * period)], b);
      const Vec& v_next =
          vm.get(traj.states[static_cast<size_t>((b + 1) * period)], b + 1);
      for (size_t s = 0; s < cells.size(); ++s) {
        if (cells[s].empty()) continue;
        acc += p * std::pow(gamma, b) * (r[s] + gamma * v_next[s] - v_now[s]);
      }
    }
  };
  wk.run();
  paths += wk.paths;
  return acc;
}

}  // namespace

AlignmentReport verify_lemma1(const TabularMdp& mdp,
                              const LevelPolicies& pi_new,
                              const LevelPolicies& pi_old, double gamma) {
  LevelPolicies pi{pi_new.mgr, pi_old.sub, pi_old.wrk};
  AlignmentReport rep = evaluate_policy(mdp, pi, gamma);
  AlignmentReport old_rep = evaluate_policy(mdp, pi_old, gamma);
  rep.eta_old = old_rep.eta;
  rep.eta_adv = eta_adv_under(mdp, pi, pi_old, gamma, rep.paths);
  rep.lemma_residual = rep.eta - rep.eta_old - rep.eta_adv / rep.k_m;
  return rep;
}

AlignmentReport verify_theorem2(const TabularMdp& mdp,
                                const LevelPolicies& pi_new,
                                const LevelPolicies& pi_old, double gamma) {
  LevelPolicies pi_hat{pi_old.mgr, pi_new.sub, pi_old.wrk};
  AlignmentReport rep = evaluate_policy(mdp, pi_hat, gamma);
  rep.eta_old = evaluate_policy(mdp, pi_old, gamma).eta;
  rep.eta_adv = eta_adv_under(mdp, pi_hat, pi_old, gamma, rep.paths);
  rep.k_s = (geom_mean_coeff(gamma, mdp.K) + 1.0) / rep.k_m;

  ManagerValues vm(mdp, pi_old, gamma);
  auto cells = cell_members(mdp);
  const int period = mdp.K * mdp.alpha;
  double eta_s = 0.0;
  Walker wk{mdp, pi_hat, nullptr};
  wk.leaf = [&](const Traj& traj, double p) {
    for (int b = 0; b < mdp.H; ++b) {
      Vec r = period_rewards(mdp, traj, b, cells);
      const Vec& v_now = vm.get(traj.states[static_cast<size_t>(b * period)], b);
      const Vec& v_next =
          vm.get(traj.states[static_cast<size_t>((b + 1) * period)], b + 1);
      for (int j = 0; j < mdp.K; ++j) {
        const int k = b * mdp.K + j;
        const double disc = std::pow(gamma, k);
        for (int w = 0; w < mdp.W; ++w) {
          const size_t s =
              static_cast<size_t>(mdp.cell_of_worker[static_cast<size_t>(w)]);
          double adv = r[s] + gamma * v_next[s] - v_now[s];
          double local = 0.0;
          for (int i = 0; i < mdp.alpha; ++i)
            local += traj.ext[static_cast<size_t>(k * mdp.alpha + i)]
                             [static_cast<size_t>(w)];
          eta_s += p * disc * (adv / mdp.K + local) / mdp.W;
        }
      }
    }
  };
  wk.run();
  rep.paths += wk.paths;
  rep.eta_s = eta_s;
  rep.thm2_residual = rep.eta_s - (rep.k_s * rep.eta_adv + rep.eta_old);
  return rep;
}

AlignmentReport verify_theorem3(const TabularMdp& mdp,
                                const LevelPolicies& pi_new,
                                const LevelPolicies& pi_old, double gamma) {
  HIMPP_CHECK(mdp.K == 1, "Theorem 3 verification requires K = 1");
  LevelPolicies pi_hat{pi_old.mgr, pi_old.sub, pi_new.wrk};
  AlignmentReport rep = evaluate_policy(mdp, pi_hat, gamma);
  rep.eta_old = evaluate_policy(mdp, pi_old, gamma).eta;
  rep.eta_adv = eta_adv_under(mdp, pi_hat, pi_old, gamma, rep.paths);
  rep.k_s = (geom_mean_coeff(gamma, mdp.K) + 1.0) / rep.k_m;
  rep.k_w = geom_mean_coeff(gamma, mdp.alpha);

  ManagerValues vm(mdp, pi_old, gamma);
  SubValues vs(mdp, pi_old, gamma, vm);
  auto cells = cell_members(mdp);
  const int period = mdp.alpha;  // K = 1

  double eta_s_old = 0.0;
  for (int w = 0; w < mdp.W; ++w)
    eta_s_old += vs.get(mdp.s0, 0)[static_cast<size_t>(w)] / mdp.W;
  rep.eta_s_old = eta_s_old;

  double eta_w = 0.0;
  Walker wk{mdp, pi_hat, nullptr};
  wk.leaf = [&](const Traj& traj, double p) {
    for (int b = 0; b < mdp.H; ++b) {
      Vec r = period_rewards(mdp, traj, b, cells);
      const int st_now = traj.states[static_cast<size_t>(b * period)];
      const int st_next = traj.states[static_cast<size_t>((b + 1) * period)];
      const Vec& vm_now = vm.get(st_now, b);
      const Vec& vm_next = vm.get(st_next, b + 1);
      const Vec& vs_now = vs.get(st_now, b);
      const Vec& vs_next = vs.get(st_next, b + 1);
      for (int w = 0; w < mdp.W; ++w) {
        const size_t s =
            static_cast<size_t>(mdp.cell_of_worker[static_cast<size_t>(w)]);
        double local = 0.0;
        for (int i = 0; i < mdp.alpha; ++i)
          local += traj.ext[static_cast<size_t>(b * period + i)]
                           [static_cast<size_t>(w)];
        double r_sw = (r[s] + gamma * vm_next[s] - vm_now[s]) + local;
        double adv_s = r_sw + gamma * vs_next[static_cast<size_t>(w)] -
                       vs_now[static_cast<size_t>(w)];
        for (int i = 0; i < mdp.alpha; ++i)
          eta_w += p * std::pow(gamma, b * period + i) * adv_s / mdp.alpha / mdp.W;
      }
    }
  };
  wk.run();
  rep.paths += wk.paths;
  rep.eta_w = eta_w;
  rep.thm3_residual =
      rep.eta_w - rep.k_w * (rep.k_s * rep.eta_adv + rep.eta_old - rep.eta_s_old);
  return rep;
}

double monte_carlo_eta(const TabularMdp& mdp, const LevelPolicies& pi,
                       double gamma, int episodes, uint64_t seed) {
  mdp.validate();
  Rng rng(seed);
  const int period = mdp.K * mdp.alpha;
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    int state = mdp.s0;
    std::vector<int> gm(static_cast<size_t>(mdp.num_cells()));
    std::vector<int> gs(static_cast<size_t>(mdp.W));
    Vec ret(static_cast<size_t>(mdp.W), 0.0);
    for (int t = 0; t < mdp.steps(); ++t) {
      if (t % period == 0)
        for (int c = 0; c < mdp.num_cells(); ++c)
          gm[static_cast<size_t>(c)] = rng.categorical(pi.mgr(state));
      if (t % mdp.alpha == 0)
        for (int w = 0; w < mdp.W; ++w)
          gs[static_cast<size_t>(w)] = rng.categorical(pi.sub(
              state, gm[static_cast<size_t>(
                        mdp.cell_of_worker[static_cast<size_t>(w)])]));
      std::vector<int> act(static_cast<size_t>(mdp.W));
      for (int w = 0; w < mdp.W; ++w)
        act[static_cast<size_t>(w)] =
            rng.categorical(pi.wrk(w, state, gs[static_cast<size_t>(w)]));
      auto nexts = mdp.transition(state, act);
      Vec weights;
      for (const auto& [tp, ns] : nexts) weights.push_back(tp);
      int pick = rng.categorical(weights);
      int ns = nexts[static_cast<size_t>(pick)].second;
      const double disc = std::pow(gamma, t / period);
      for (int w = 0; w < mdp.W; ++w)
        ret[static_cast<size_t>(w)] += disc * mdp.reward(w, state, act, ns);
      state = ns;
    }
    double mean = 0.0;
    for (double rv : ret) mean += rv;
    total += mean / static_cast<double>(mdp.W);
  }
  return total / static_cast<double>(episodes);
}

TabularMdp toy_two_cells() {
  TabularMdp m;
  m.num_states = 2;
  m.num_actions = 2;
  m.W = 2;
  m.cell_of_worker = {0, 1};
  m.alpha = 1;
  m.K = 1;
  m.H = 3;
  m.transition = [](int state, const std::vector<int>& act) {
    int next = (state + act[0] + act[1]) % 2;
    return std::vector<std::pair<double, int>>{{1.0, next}};
  };
  m.reward = [](int w, int state, const std::vector<int>& act, int next) {
    return (state == 1 ? 1.0 : 0.2) +
           0.3 * act[static_cast<size_t>(w)] + 0.2 * next;
  };
  return m;
}

TabularMdp toy_four_workers() {
  TabularMdp m;
  m.num_states = 2;
  m.num_actions = 2;
  m.W = 4;
  m.cell_of_worker = {0, 0, 1, 1};
  m.num_sub_goals = 1;
  m.alpha = 1;
  m.K = 1;
  m.H = 2;
  m.transition = [](int state, const std::vector<int>& act) {
    int sum = 0;
    for (int a : act) sum += a;
    int flip = (state + sum) % 2;
    return std::vector<std::pair<double, int>>{{0.7, flip}, {0.3, state}};
  };
  m.reward = [](int w, int state, const std::vector<int>& act, int next) {
    return 0.5 * state + 0.4 * act[static_cast<size_t>(w)] + 0.1 * next;
  };
  return m;
}

TabularMdp toy_deep() {
  TabularMdp m;
  m.num_states = 2;
  m.num_actions = 2;
  m.W = 2;
  m.cell_of_worker = {0, 1};
  m.num_mgr_goals = 1;  // keeps full-horizon enumeration tractable
  m.num_sub_goals = 1;
  m.alpha = 2;
  m.K = 1;
  m.H = 4;
  m.transition = [](int state, const std::vector<int>& act) {
    int next = (state + act[0] + act[1]) % 2;
    return std::vector<std::pair<double, int>>{{1.0, next}};
  };
  m.reward = [](int w, int state, const std::vector<int>& act, int next) {
    return 0.6 * state + 0.3 * act[static_cast<size_t>(w)] + 0.1 * next;
  };
  return m;
}

TabularMdp toy_periodic(int K, int alpha) {
  TabularMdp m;
  m.num_states = 3;
  m.num_actions = 2;
  m.W = 1;
  m.cell_of_worker = {0};
  m.alpha = alpha;
  m.K = K;
  m.H = 2;
  m.transition = [](int state, const std::vector<int>& act) {
    int next = (state + 1 + act[0]) % 3;
    return std::vector<std::pair<double, int>>{{1.0, next}};
  };
  m.reward = [](int, int state, const std::vector<int>& act, int next) {
    return 0.3 * state + 0.5 * act[0] + 0.2 * (next == 2);
  };
  return m;
}

TabularMdp toy_nonhomogeneous() {
  // Unequal cell sizes plus a worker earning double: the per-cell means no
  // longer average to the per-worker mean, so eta_m != k_m * eta.
  TabularMdp m = toy_four_workers();
  m.W = 3;
  m.cell_of_worker = {0, 0, 1};
  auto base = m.reward;
  m.reward = [base](int w, int state, const std::vector<int>& act, int next) {
    double r = base(w, state, act, next);
    return w == 1 ? 2.0 * r : r;
  };
  return m;
}

namespace {
Vec normalized(Vec w) {
  double z = 0.0;
  for (double x : w) z += x;
  for (double& x : w) x /= z;
  return w;
}
}  // namespace

LevelPolicies uniform_policies(const TabularMdp& mdp) {
  LevelPolicies pi;
  pi.mgr = [n = mdp.num_mgr_goals](int) {
    return Vec(static_cast<size_t>(n), 1.0 / n);
  };
  pi.sub = [n = mdp.num_sub_goals](int, int) {
    return Vec(static_cast<size_t>(n), 1.0 / n);
  };
  pi.wrk = [n = mdp.num_actions](int, int, int) {
    return Vec(static_cast<size_t>(n), 1.0 / n);
  };
  return pi;
}

LevelPolicies tilted_policies(const TabularMdp& mdp, double eps) {
  LevelPolicies pi;
  pi.mgr = [n = mdp.num_mgr_goals, eps](int state) {
    Vec w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      w[static_cast<size_t>(i)] = 1.0 + eps * i + 0.5 * eps * ((state + i) % 2);
    return normalized(std::move(w));
  };
  pi.sub = [n = mdp.num_sub_goals, eps](int state, int gm) {
    Vec w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      w[static_cast<size_t>(i)] =
          1.0 + eps * i + 0.5 * eps * ((state + gm + i) % 2);
    return normalized(std::move(w));
  };
  pi.wrk = [n = mdp.num_actions, eps](int, int state, int gs) {
    Vec w(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
      w[static_cast<size_t>(i)] =
          1.0 + eps * i + 0.5 * eps * ((state + gs + i) % 2);
    return normalized(std::move(w));
  };
  return pi;
}

}  // namespace himpp::oracle
