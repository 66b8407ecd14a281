#include "himpp/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace himpp {

namespace {

std::vector<std::vector<int>> fixed_adjacency(int n, Topology topo) {
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  auto link = [&](int i, int j) {
    adj[static_cast<size_t>(i)].push_back(j);
    adj[static_cast<size_t>(j)].push_back(i);
  };
  switch (topo) {
    case Topology::distance:
      break;
    case Topology::star:
      for (int i = 1; i < n; ++i) link(0, i);
      break;
    case Topology::complete:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) link(i, j);
      break;
    case Topology::path:
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      break;
    case Topology::cycle:
      for (int i = 0; i + 1 < n; ++i) link(i, i + 1);
      if (n > 2) link(n - 1, 0);
      break;
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

template <typename T>
void fisher_yates(std::vector<T>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.uniform_int(0, static_cast<int>(i) - 1));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

Model::Model(ModelSpec spec, const Env& env) : spec_(std::move(spec)) {
  spec_.latent.levels = spec_.hier.levels;
  env.describe_obs(spec_.latent);
  spec_.hier.metric = env.metric();
  spec_.hier.comm_range = env.comm_range();
  spec_.action_dim = env.action_dim();
  spec_.worker_head =
      env.discrete_actions() ? HeadKind::categorical : HeadKind::gaussian;
  if (spec_.hier.levels >= 2) spec_.hier.validate();

  latent_ = LatentModel("net", spec_.latent);
  const int d = spec_.latent.goal_dim();
  if (spec_.hier.levels >= 2)
    manager_ = PolicyHead("head.m", HeadKind::gaussian,
                          spec_.latent.manager_obs_dim(), d, spec_.actor_hidden,
                          spec_.critic_hidden);
  if (spec_.hier.levels == 3)
    submanager_ = PolicyHead("head.s", HeadKind::gaussian,
                             spec_.latent.sub_obs_dim(), d, spec_.actor_hidden,
                             spec_.critic_hidden);
  worker_ = PolicyHead("head.w", spec_.worker_head,
                       spec_.latent.worker_obs_dim(), spec_.action_dim,
                       spec_.actor_hidden, spec_.critic_hidden);
}

void Model::init(ParamStore& ps, Rng& rng) {
  latent_.init(ps, rng);
  if (spec_.hier.levels >= 2) manager_.init(ps, rng);
  if (spec_.hier.levels == 3) submanager_.init(ps, rng);
  worker_.init(ps, rng);
}

std::vector<std::string> Model::actor_prefixes(const std::string& level) const {
  return {"net." + level + ".", "head." + level + ".actor."};
}
std::vector<std::string> Model::critic_prefixes(const std::string& level) const {
  return {"head." + level + ".critic."};
}
std::vector<std::string> Model::level_prefixes(const std::string& level) const {
  return {"net." + level + ".", "head." + level + "."};
}

HierGraph Model::make_graph(GraphProvider& gp,
                            const std::vector<Pos>& positions) const {
  HierGraph g;
  if (spec_.hier.levels == 1) {
    g.num_workers = static_cast<int>(positions.size());
    g.worker_adj = build_worker_graph(positions, spec_.hier.comm_range,
                                      spec_.hier.metric);
  } else {
    g = gp.step(positions);
  }
  if (spec_.topology != Topology::distance)
    g.worker_adj = fixed_adjacency(g.num_workers, spec_.topology);
  return g;
}

struct Trainer::Sample {
  int ep = 0;
  int t = 0;    // environment step at which to replay the forward pass
  int idx = 0;  // worker index, or cell / worker column for the manager
  double adv = 0.0;
  double ret = 0.0;
  double logp_old = 0.0;
  double sigma = 0.5;
  Vec action;
};

struct Trainer::Targets {
  std::vector<std::vector<double>> mgr_adv;  // [b][cell or w]
  std::vector<std::vector<bool>> present;    // manager entries that train
  std::vector<std::vector<double>> sub_adv;  // [k][w] (3-level)
  std::vector<std::vector<double>> adv_w;    // [t][w]
  std::vector<std::vector<double>> ret_w;    // [t][w]
  double reward_manager = 0.0;     // mean assigned reward per level
  double reward_submanager = 0.0;
  double reward_worker = 0.0;
};

Trainer::Trainer(TrainConfig cfg, Model& model, Env& env, ParamStore& ps)
    : cfg_(cfg), model_(model), env_(env), ps_(ps),
      env_rng_(cfg.seed * 0x9e3779b97f4a7c15ull + 1),
      policy_rng_(cfg.seed * 0x9e3779b97f4a7c15ull + 2),
      shuffle_rng_(cfg.seed * 0x9e3779b97f4a7c15ull + 3),
      eval_rng_(cfg.seed * 0x9e3779b97f4a7c15ull + 4) {}

EpisodeData Trainer::collect_episode(bool greedy) {
  const int levels = model_.levels();
  const ModelSpec& ms = model_.spec();
  const int d = ms.latent.goal_dim();
  Rng& erng = greedy ? eval_rng_ : env_rng_;
  Rng& prng = greedy ? eval_rng_ : policy_rng_;

  EpisodeData ep;
  ep.sigma = cfg_.sigma.value(env_steps_);
  env_.reset(erng);
  const int W = env_.num_agents();
  GraphProvider gp(levels >= 2 ? ms.hier : HierarchySpec{});
  gp.reset();
  Schedule sched{levels, ms.hier.alpha, ms.hier.K};

  ep.ro.W = W;
  ep.ro.levels = levels == 3 ? 3 : 2;
  ep.ro.alpha = ms.hier.alpha;
  ep.ro.K = levels == 3 ? ms.hier.K : 1;
  ep.ro.num_cells = kNumQuadrants;

  const int goal_cols = levels == 3 ? kNumQuadrants : W;
  std::vector<Vec> mgr_goals(static_cast<size_t>(goal_cols),
                             Vec(static_cast<size_t>(d), 0.0));
  std::vector<Vec> sub_goals(static_cast<size_t>(W),
                             Vec(static_cast<size_t>(d), 0.0));
  const std::vector<Vec> no_goals;

  bool done = false;
  int t = 0;
  while (!done) {
    std::vector<RawObs> obs(static_cast<size_t>(W));
    for (int w = 0; w < W; ++w) obs[static_cast<size_t>(w)] = env_.observe(w);
    std::vector<Pos> pos = env_.positions();
    HierGraph g = model_.make_graph(gp, pos);

    auto run = [&]() {
      if (levels == 1) return model_.latent().run(ps_, g, obs, no_goals, no_goals);
      if (levels == 2) return model_.latent().run(ps_, g, obs, mgr_goals, no_goals);
      return model_.latent().run(ps_, g, obs, mgr_goals, sub_goals);
    };
    StepLatent lat = run();

    if (levels >= 2 && sched.manager_emits(t)) {
      std::vector<double> lp_row, v_row;
      for (int c = 0; c < goal_cols; ++c) {
        ActOut a = greedy
                       ? model_.manager().act_greedy(
                             *lat.tape, lat.mgr_obs[static_cast<size_t>(c)])
                       : model_.manager().act(
                             *lat.tape, lat.mgr_obs[static_cast<size_t>(c)],
                             ep.sigma, prng);
        mgr_goals[static_cast<size_t>(c)] = a.sample;
        lp_row.push_back(a.log_prob);
        v_row.push_back(a.value);
      }
      ep.logp_m.push_back(lp_row);
      ep.ro.value_m.push_back(v_row);
      lat = run();  // goal-dependent observations must see the new goals
    }
    if (levels == 3 && sched.submanager_emits(t)) {
      std::vector<double> lp_row, v_row;
      for (int w = 0; w < W; ++w) {
        ActOut a = greedy
                       ? model_.submanager().act_greedy(
                             *lat.tape, lat.sub_obs[static_cast<size_t>(w)])
                       : model_.submanager().act(
                             *lat.tape, lat.sub_obs[static_cast<size_t>(w)],
                             ep.sigma, prng);
        sub_goals[static_cast<size_t>(w)] = a.sample;
        lp_row.push_back(a.log_prob);
        v_row.push_back(a.value);
      }
      ep.logp_s.push_back(lp_row);
      ep.ro.value_s.push_back(v_row);
      lat = run();
    }

    std::vector<Vec> actions(static_cast<size_t>(W));
    std::vector<double> lp_row(static_cast<size_t>(W)), v_row(static_cast<size_t>(W));
    for (int w = 0; w < W; ++w) {
      ActOut a = greedy ? model_.worker().act_greedy(
                              *lat.tape, lat.worker_obs[static_cast<size_t>(w)])
                        : model_.worker().act(
                              *lat.tape, lat.worker_obs[static_cast<size_t>(w)],
                              ep.sigma, prng);
      actions[static_cast<size_t>(w)] = a.sample;
      lp_row[static_cast<size_t>(w)] = a.log_prob;
      v_row[static_cast<size_t>(w)] = a.value;
    }

    StepResult sr = env_.step(actions);
    for (double r : sr.rewards) ep.team_return += r;

    ep.obs.push_back(std::move(obs));
    ep.positions.push_back(std::move(pos));
    ep.graph.push_back(g);
    ep.mgr_goals.push_back(mgr_goals);
    ep.sub_goals.push_back(sub_goals);
    ep.actions.push_back(std::move(actions));
    ep.logp_w.push_back(std::move(lp_row));
    ep.value_w.push_back(std::move(v_row));
    ep.ro.ext.push_back(sr.rewards);
    if (levels == 3) ep.ro.cell.push_back(g.cell_of_worker);

    done = sr.done;
    ++t;
    if (!greedy) ++env_steps_;
  }
  ep.ro.T = t;
  return ep;
}

Trainer::Targets Trainer::compute_targets(const EpisodeData& ep) const {
  Targets tg;
  const int levels = model_.levels();
  const int W = ep.ro.W;
  std::vector<std::vector<double>> r_w;

  auto table_mean = [](const std::vector<std::vector<double>>& rows) {
    double sum = 0.0;
    long n = 0;
    for (const auto& row : rows)
      for (double x : row) {
        sum += x;
        ++n;
      }
    return n > 0 ? sum / static_cast<double>(n) : 0.0;
  };

  if (levels == 1) {
    r_w = ep.ro.ext;
  } else {
    ManagerRewards mr = manager_rewards(ep.ro);
    tg.mgr_adv = manager_advantages(ep.ro, mr, cfg_.gamma);
    tg.present = mr.present;
    {
      double sum = 0.0;
      long n = 0;
      for (size_t b = 0; b < mr.r.size(); ++b)
        for (size_t c = 0; c < mr.r[b].size(); ++c)
          if (mr.present[b][c]) {
            sum += mr.r[b][c];
            ++n;
          }
      tg.reward_manager = n > 0 ? sum / static_cast<double>(n) : 0.0;
    }
    if (levels == 2) {
      r_w = worker_rewards_2level(ep.ro, tg.mgr_adv, cfg_.flags);
    } else {
      auto sub_r = submanager_rewards(ep.ro, tg.mgr_adv, cfg_.flags);
      tg.sub_adv = submanager_advantages(ep.ro, sub_r, cfg_.gamma);
      tg.reward_submanager = table_mean(sub_r);
      r_w = model_.spec().hier.dynamic
                ? worker_rewards_dynamic(ep.ro, sub_r, cfg_.trunc, cfg_.gamma,
                                         cfg_.flags)
                : worker_rewards_static(ep.ro, tg.sub_adv, cfg_.flags);
    }
  }
  tg.reward_worker = table_mean(r_w);

  const int tc = static_cast<int>(r_w.size());
  tg.adv_w.assign(static_cast<size_t>(tc), std::vector<double>(static_cast<size_t>(W), 0.0));
  tg.ret_w = tg.adv_w;
  for (int w = 0; w < W; ++w) {
    Vec rw(static_cast<size_t>(tc)), vw(static_cast<size_t>(tc));
    for (int t = 0; t < tc; ++t) {
      rw[static_cast<size_t>(t)] = r_w[static_cast<size_t>(t)][static_cast<size_t>(w)];
      vw[static_cast<size_t>(t)] = ep.value_w[static_cast<size_t>(t)][static_cast<size_t>(w)];
    }
    Vec adv = gae(rw, vw, cfg_.gamma, cfg_.lam_worker);
    for (int t = 0; t < tc; ++t) {
      tg.adv_w[static_cast<size_t>(t)][static_cast<size_t>(w)] = adv[static_cast<size_t>(t)];
      tg.ret_w[static_cast<size_t>(t)][static_cast<size_t>(w)] =
          adv[static_cast<size_t>(t)] + vw[static_cast<size_t>(t)];
    }
  }
  return tg;
}

double Trainer::update_level(const std::vector<EpisodeData>& batch,
                             const std::string& level,
                             std::vector<Sample> samples) {
  if (samples.empty()) return 0.0;
  const PolicyHead& head = level == "m"   ? model_.manager()
                           : level == "s" ? model_.submanager()
                                          : model_.worker();
  const std::vector<Vec> no_goals;
  const int levels = model_.levels();
  double loss_sum = 0.0;
  long loss_count = 0;

  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    fisher_yates(samples, shuffle_rng_);
    for (size_t begin = 0; begin < samples.size(); begin += static_cast<size_t>(cfg_.minibatch)) {
      size_t end = std::min(samples.size(), begin + static_cast<size_t>(cfg_.minibatch));
      const double m = static_cast<double>(end - begin);

      double mean = 0.0, var = 0.0;
      for (size_t i = begin; i < end; ++i) mean += samples[i].adv;
      mean /= m;
      for (size_t i = begin; i < end; ++i) {
        double dlt = samples[i].adv - mean;
        var += dlt * dlt;
      }
      const double stddev = std::sqrt(var / m) + 1e-8;

      ps_.zero_grad();
      // share one forward pass per (episode, step) within the minibatch
      std::map<std::pair<int, int>, std::vector<size_t>> groups;
      for (size_t i = begin; i < end; ++i)
        groups[{samples[i].ep, samples[i].t}].push_back(i);

      for (const auto& [key, members] : groups) {
        const EpisodeData& e = batch[static_cast<size_t>(key.first)];
        const size_t t = static_cast<size_t>(key.second);
        StepLatent lat =
            levels == 1 ? model_.latent().run(ps_, e.graph[t], e.obs[t], no_goals, no_goals)
            : levels == 2
                ? model_.latent().run(ps_, e.graph[t], e.obs[t], e.mgr_goals[t], no_goals)
                : model_.latent().run(ps_, e.graph[t], e.obs[t], e.mgr_goals[t],
                                      e.sub_goals[t]);
        const std::vector<int>& obs_nodes = level == "m"   ? lat.mgr_obs
                                            : level == "s" ? lat.sub_obs
                                                           : lat.worker_obs;
        std::vector<std::pair<int, Vec>> seeds;
        for (size_t i : members) {
          const Sample& s = samples[i];
          const double adv_n = (s.adv - mean) / stddev;
          int obs_node = obs_nodes[static_cast<size_t>(s.idx)];
          int mu = head.mean_node(*lat.tape, obs_node);
          int vn = head.value_node(*lat.tape, obs_node);
          const Vec& mu_val = lat.tape->value(mu);
          const double v = lat.tape->value(vn)[0];

          double lp = head.log_prob(mu_val, s.action, s.sigma);
          double ratio = std::exp(lp - s.logp_old);
          double surr1 = ratio * adv_n;
          double surr2 = std::clamp(ratio, 1.0 - cfg_.clip, 1.0 + cfg_.clip) * adv_n;
          double dldlp = surr1 <= surr2 ? -adv_n * ratio : 0.0;

          Vec seed_mu = head.dlogp(mu_val, s.action, s.sigma);
          Vec dent = head.dentropy(mu_val, s.sigma);
          for (size_t j = 0; j < seed_mu.size(); ++j)
            seed_mu[j] = (dldlp * seed_mu[j] - cfg_.ent_coef * dent[j]) / m;
          Vec seed_v = {cfg_.value_coef * (v - s.ret) / m};
          seeds.emplace_back(mu, std::move(seed_mu));
          seeds.emplace_back(vn, std::move(seed_v));

          loss_sum += -std::min(surr1, surr2) +
                      cfg_.value_coef * 0.5 * (v - s.ret) * (v - s.ret) -
                      cfg_.ent_coef * head.entropy(mu_val, s.sigma);
          ++loss_count;
        }
        lat.tape->backward(seeds);
      }
      ps_.gradient_clip(-cfg_.grad_clip, cfg_.grad_clip);
      ps_.adam_step_prefixed(model_.actor_prefixes(level), cfg_.lr_actor);
      ps_.adam_step_prefixed(model_.critic_prefixes(level), cfg_.lr_critic);
    }
  }
  return loss_sum / static_cast<double>(std::max(1l, loss_count));
}

UpdateStats Trainer::iterate() {
  const int levels = model_.levels();
  UpdateStats st;
  std::vector<EpisodeData> batch;
  for (int i = 0; i < cfg_.episodes_per_update; ++i)
    batch.push_back(collect_episode(false));

  std::vector<Sample> sm, ss, sw;
  for (size_t e = 0; e < batch.size(); ++e) {
    const EpisodeData& ep = batch[e];
    Targets tg = compute_targets(ep);
    st.episodes.push_back({ep.team_return, ep.ro.T, tg.reward_manager,
                           tg.reward_submanager, tg.reward_worker});
    const int period = ep.ro.manager_period();

    if (levels >= 2) {
      for (size_t b = 0; b < tg.mgr_adv.size(); ++b)
        for (size_t c = 0; c < tg.mgr_adv[b].size(); ++c) {
          if (!tg.present[b][c]) continue;
          Sample s;
          s.ep = static_cast<int>(e);
          s.t = static_cast<int>(b) * period;
          s.idx = static_cast<int>(c);
          s.adv = tg.mgr_adv[b][c];
          s.ret = tg.mgr_adv[b][c] + ep.ro.value_m[b][c];
          s.logp_old = ep.logp_m[b][c];
          s.sigma = ep.sigma;
          s.action = ep.mgr_goals[static_cast<size_t>(s.t)][c];
          sm.push_back(std::move(s));
        }
    }
    if (levels == 3) {
      for (size_t k = 0; k < tg.sub_adv.size(); ++k)
        for (size_t w = 0; w < tg.sub_adv[k].size(); ++w) {
          Sample s;
          s.ep = static_cast<int>(e);
          s.t = static_cast<int>(k) * ep.ro.alpha;
          s.idx = static_cast<int>(w);
          s.adv = tg.sub_adv[k][w];
          s.ret = tg.sub_adv[k][w] + ep.ro.value_s[k][w];
          s.logp_old = ep.logp_s[k][w];
          s.sigma = ep.sigma;
          s.action = ep.sub_goals[static_cast<size_t>(s.t)][w];
          ss.push_back(std::move(s));
        }
    }
    for (size_t t = 0; t < tg.adv_w.size(); ++t)
      for (size_t w = 0; w < tg.adv_w[t].size(); ++w) {
        Sample s;
        s.ep = static_cast<int>(e);
        s.t = static_cast<int>(t);
        s.idx = static_cast<int>(w);
        s.adv = tg.adv_w[t][w];
        s.ret = tg.ret_w[t][w];
        s.logp_old = ep.logp_w[t][w];
        s.sigma = ep.sigma;
        s.action = ep.actions[t][w];
        sw.push_back(std::move(s));
      }
  }

  if (levels >= 2) st.loss_manager = update_level(batch, "m", std::move(sm));
  if (levels == 3) st.loss_submanager = update_level(batch, "s", std::move(ss));
  st.loss_worker = update_level(batch, "w", std::move(sw));

  st.env_steps = env_steps_;
  st.sigma = cfg_.sigma.value(env_steps_);
  return st;
}

double Trainer::evaluate(int episodes) {
  double total = 0.0;
  for (int i = 0; i < episodes; ++i) total += collect_episode(true).team_return;
  return total / static_cast<double>(std::max(1, episodes));
}

double gradient_check(Model& model, Env& env, uint64_t seed, int max_entries,
                      std::map<std::string, double>* per_group) {
  ParamStore ps;
  Rng rng(seed);
  model.init(ps, rng);
  Rng erng(seed + 17);
  env.reset(erng);

  const int levels = model.levels();
  const int W = env.num_agents();
  const int d = model.spec().latent.goal_dim();
  const double sigma = 0.5;

  std::vector<RawObs> obs(static_cast<size_t>(W));
  for (int w = 0; w < W; ++w) obs[static_cast<size_t>(w)] = env.observe(w);
  GraphProvider gp(levels >= 2 ? model.spec().hier : HierarchySpec{});
  HierGraph g = model.make_graph(gp, env.positions());

  const int goal_cols = levels == 3 ? kNumQuadrants : W;
  std::vector<Vec> mgr_goals(static_cast<size_t>(goal_cols), Vec(static_cast<size_t>(d)));
  std::vector<Vec> sub_goals(static_cast<size_t>(W), Vec(static_cast<size_t>(d)));
  for (auto& v : mgr_goals)
    for (double& x : v) x = rng.normal();
  for (auto& v : sub_goals)
    for (double& x : v) x = rng.normal();
  const std::vector<Vec> no_goals;

  auto run = [&](ParamStore& store) {
    if (levels == 1) return model.latent().run(store, g, obs, no_goals, no_goals);
    if (levels == 2) return model.latent().run(store, g, obs, mgr_goals, no_goals);
    return model.latent().run(store, g, obs, mgr_goals, sub_goals);
  };

  // Fixed realized samples per actor, drawn once around the initial means.
  StepLatent lat0 = run(ps);
  std::vector<Vec> mgr_samples, sub_samples, wrk_samples;
  if (levels >= 2)
    for (int c = 0; c < goal_cols; ++c) {
      const Vec& mu = lat0.value(model.manager().mean_node(
          *lat0.tape, lat0.mgr_obs[static_cast<size_t>(c)]));
      Vec s(mu.size());
      for (size_t j = 0; j < s.size(); ++j) s[j] = mu[j] + sigma * rng.normal();
      mgr_samples.push_back(std::move(s));
    }
  if (levels == 3)
    for (int w = 0; w < W; ++w) {
      const Vec& mu = lat0.value(model.submanager().mean_node(
          *lat0.tape, lat0.sub_obs[static_cast<size_t>(w)]));
      Vec s(mu.size());
      for (size_t j = 0; j < s.size(); ++j) s[j] = mu[j] + sigma * rng.normal();
      sub_samples.push_back(std::move(s));
    }
  for (int w = 0; w < W; ++w) {
    if (model.worker().kind() == HeadKind::categorical) {
      wrk_samples.push_back({static_cast<double>(rng.uniform_int(0, model.spec().action_dim - 1))});
    } else {
      const Vec& mu = lat0.value(model.worker().mean_node(
          *lat0.tape, lat0.worker_obs[static_cast<size_t>(w)]));
      Vec s(mu.size());
      for (size_t j = 0; j < s.size(); ++j) s[j] = mu[j] + sigma * rng.normal();
      wrk_samples.push_back(std::move(s));
    }
  }

  auto objective = [&](ParamStore& store) {
    StepLatent lat = run(store);
    double L = 0.0;
    auto add_actor = [&](const PolicyHead& head, int obs_node, const Vec& sample) {
      const Vec& mu = lat.value(head.mean_node(*lat.tape, obs_node));
      L += head.log_prob(mu, sample, sigma) + head.entropy(mu, sigma);
      L += lat.value(head.value_node(*lat.tape, obs_node))[0];
    };
    if (levels >= 2)
      for (int c = 0; c < goal_cols; ++c)
        add_actor(model.manager(), lat.mgr_obs[static_cast<size_t>(c)],
                  mgr_samples[static_cast<size_t>(c)]);
    if (levels == 3)
      for (int w = 0; w < W; ++w)
        add_actor(model.submanager(), lat.sub_obs[static_cast<size_t>(w)],
                  sub_samples[static_cast<size_t>(w)]);
    for (int w = 0; w < W; ++w)
      add_actor(model.worker(), lat.worker_obs[static_cast<size_t>(w)],
                wrk_samples[static_cast<size_t>(w)]);
    return L;
  };

  // Analytic gradients of the same objective.
  ps.zero_grad();
  {
    StepLatent lat = run(ps);
    std::vector<std::pair<int, Vec>> seeds;
    auto seed_actor = [&](const PolicyHead& head, int obs_node, const Vec& sample) {
      int mu = head.mean_node(*lat.tape, obs_node);
      int vn = head.value_node(*lat.tape, obs_node);
      const Vec& mu_val = lat.tape->value(mu);
      Vec s = head.dlogp(mu_val, sample, sigma);
      Vec dent = head.dentropy(mu_val, sigma);
      for (size_t j = 0; j < s.size(); ++j) s[j] += dent[j];
      seeds.emplace_back(mu, std::move(s));
      seeds.emplace_back(vn, Vec{1.0});
    };
    if (levels >= 2)
      for (int c = 0; c < goal_cols; ++c)
        seed_actor(model.manager(), lat.mgr_obs[static_cast<size_t>(c)],
                   mgr_samples[static_cast<size_t>(c)]);
    if (levels == 3)
      for (int w = 0; w < W; ++w)
        seed_actor(model.submanager(), lat.sub_obs[static_cast<size_t>(w)],
                   sub_samples[static_cast<size_t>(w)]);
    for (int w = 0; w < W; ++w)
      seed_actor(model.worker(), lat.worker_obs[static_cast<size_t>(w)],
                 wrk_samples[static_cast<size_t>(w)]);
    lat.tape->backward(seeds);
  }

  // Central finite differences over a deterministic subsample of entries.
  // Round-off in f(x±h) caps FD resolution near |f|*eps/h, so gradients far
  // below the objective's scale are compared against a matching floor.
  const double rel_floor = std::max(1e-6, 1e-6 * std::fabs(objective(ps)));
  size_t total_entries = 0;
  for (const auto& [name, p] : ps.params()) total_entries += p.size();
  size_t stride = std::max<size_t>(1, total_entries / static_cast<size_t>(max_entries));

  double max_rel = 0.0;
  size_t flat = 0;
  for (auto& [name, p] : ps.params()) {
    for (size_t j = 0; j < p.size(); ++j, ++flat) {
      if (flat % stride != 0) continue;
      const double x = p.value[j];
      const double h = 1e-5 * std::max(1.0, std::fabs(x));
      p.value[j] = x + h;
      double up = objective(ps);
      p.value[j] = x - h;
      double down = objective(ps);
      p.value[j] = x;
      double fd = (up - down) / (2.0 * h);
      double an = p.grad[j];
      double rel = std::fabs(an - fd) /
                   std::max({std::fabs(an), std::fabs(fd), rel_floor});
      max_rel = std::max(max_rel, rel);
      if (per_group) {
        size_t dot = name.find('.');
        if (dot != std::string::npos) dot = name.find('.', dot + 1);
        std::string group = dot == std::string::npos ? name : name.substr(0, dot);
        auto it = per_group->find(group);
        if (it == per_group->end())
          (*per_group)[group] = rel;
        else
          it->second = std::max(it->second, rel);
      }
    }
  }
  return max_rel;
}

}  // namespace himpp
