#include "himpp/harness/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "himpp/envs/lbfws.hpp"
#include "himpp/envs/sampling.hpp"
#include "himpp/oracle/tabular.hpp"

namespace himpp {

namespace fs = std::filesystem;
using nlohmann::json;

const char* kEpisodeCsvHeader =
    "episode,steps,team_return,return_per_agent,reward_manager,"
    "reward_submanager,reward_worker,loss_manager,loss_submanager,"
    "loss_worker,sigma";

namespace {

constexpr const char* kVersion = "himpp-0.1.0";

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

std::string hash_hex(uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Topology variant_topology(const std::string& v) {
  if (v == "gppo-star") return Topology::star;
  if (v == "gppo-complete") return Topology::complete;
  if (v == "gppo-path") return Topology::path;
  if (v == "gppo-cycle") return Topology::cycle;
  return Topology::distance;
}

void write_metadata(const RunConfig& cfg, const std::string& subcommand,
                    double wall_seconds, long env_steps) {
  std::ofstream out(fs::path(cfg.out_dir) /
                    ("metadata_" + subcommand + ".txt"));
  out << "version: " << kVersion << "\n"
      << "subcommand: " << subcommand << "\n"
      << "config_hash: " << hash_hex(cfg.config_hash()) << "\n"
      << "seed: " << cfg.seed << "\n"
      << "env_steps: " << env_steps << "\n"
      << "wall_seconds: " << num(wall_seconds) << "\n";
}

void write_checkpoint(const RunConfig& cfg, const ParamStore& ps,
                      const std::string& name) {
  fs::path base = fs::path(cfg.out_dir) / name;
  ps.save(base.string() + ".bin");
  std::ofstream meta(base.string() + ".meta");
  meta << "config_hash: " << hash_hex(cfg.config_hash()) << "\n"
       << "version: " << kVersion << "\n";
}

double random_policy_return(const RunConfig& cfg, Env& env, int episodes) {
  // Uniform random actions; the sanity-run yardstick.
  Rng rng(cfg.seed * 0x9e3779b97f4a7c15ull + 99);
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    env.reset(rng);
    bool done = false;
    while (!done) {
      std::vector<Vec> actions(static_cast<size_t>(env.num_agents()));
      for (Vec& a : actions) {
        if (env.discrete_actions()) {
          a = {static_cast<double>(rng.uniform_int(0, env.action_dim() - 1))};
        } else {
          a.resize(static_cast<size_t>(env.action_dim()));
          for (double& x : a) x = rng.normal();
        }
      }
      StepResult sr = env.step(actions);
      for (double r : sr.rewards) total += r;
      done = sr.done;
    }
  }
  return total / static_cast<double>(std::max(1, episodes));
}

int do_train(const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(cfg.out_dir);
  {
    std::ofstream out(fs::path(cfg.out_dir) / "config.txt");
    out << cfg.resolved_text();
  }

  auto env = make_env(cfg);
  Model model = make_model(cfg, *env);
  ParamStore ps;
  Rng init_rng(cfg.seed);
  model.init(ps, init_rng);

  std::ofstream csv(fs::path(cfg.out_dir) / "episodes.csv");
  csv << kEpisodeCsvHeader << "\n";
  std::ofstream evalcsv(fs::path(cfg.out_dir) / "eval.csv");
  evalcsv << "update,env_steps,mean_return\n";

  Trainer trainer(cfg.train, model, *env, ps);
  write_checkpoint(cfg, ps, "checkpoint_init");

  int update = 0;
  long episode = 0;
  const int W = env->num_agents();
  while (trainer.env_steps() < cfg.budget) {
    UpdateStats st = trainer.iterate();
    ++update;
    for (const EpisodeSummary& es : st.episodes) {
      csv << episode++ << ',' << es.length << ',' << num(es.team_return) << ','
          << num(es.team_return / W) << ',' << num(es.reward_manager) << ','
          << num(es.reward_submanager) << ',' << num(es.reward_worker) << ','
          << num(st.loss_manager) << ',' << num(st.loss_submanager) << ','
          << num(st.loss_worker) << ',' << num(st.sigma) << "\n";
    }
    if (cfg.eval_every > 0 && update % cfg.eval_every == 0) {
      double mean = trainer.evaluate(cfg.eval_episodes);
      evalcsv << update << ',' << st.env_steps << ',' << num(mean) << "\n";
      evalcsv.flush();  // progress stays visible during long runs
      csv.flush();
    }
    if (cfg.checkpoint_every > 0 && update % cfg.checkpoint_every == 0)
      write_checkpoint(cfg, ps, "checkpoint_" + std::to_string(update));
  }
  write_checkpoint(cfg, ps, "checkpoint_final");

  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  write_metadata(cfg, "train", wall, trainer.env_steps());
  std::cout << "train done: updates=" << update
            << " env_steps=" << trainer.env_steps() << "\n";
  return 0;
}

int do_eval(const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(cfg.out_dir);
  auto env = make_env(cfg);
  Model model = make_model(cfg, *env);
  ParamStore ps;
  Rng init_rng(cfg.seed);
  model.init(ps, init_rng);
  fs::path ckpt = fs::path(cfg.out_dir) / "checkpoint_final.bin";
  if (fs::exists(ckpt)) ps.load(ckpt.string());

  Trainer trainer(cfg.train, model, *env, ps);
  double total = 0.0, best = -1e300, worst = 1e300;
  EpisodeData first;
  for (int e = 0; e < cfg.eval_episodes; ++e) {
    EpisodeData ep = trainer.collect_episode(true);
    total += ep.team_return;
    best = std::max(best, ep.team_return);
    worst = std::min(worst, ep.team_return);
    if (e == 0) first = std::move(ep);
  }
  double mean = total / std::max(1, cfg.eval_episodes);
  double rnd = random_policy_return(cfg, *env, cfg.eval_episodes);
  write_replay((fs::path(cfg.out_dir) / "replay.jsonl").string(), first);

  std::ofstream out(fs::path(cfg.out_dir) / "eval_summary.txt");
  auto report = [&](std::ostream& os) {
    os << "episodes: " << cfg.eval_episodes << "\n"
       << "mean_return: " << num(mean) << "\n"
       << "min_return: " << num(worst) << "\n"
       << "max_return: " << num(best) << "\n"
       << "random_policy_mean: " << num(rnd) << "\n";
  };
  report(out);
  report(std::cout);
  double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  write_metadata(cfg, "eval", wall, 0);
  return 0;
}

int do_verify(const RunConfig& cfg) {
  using namespace oracle;
  const double gamma = cfg.train.gamma;
  int failures = 0;
  auto check = [&](const std::string& name, double residual, double tol) {
    bool ok = std::fabs(residual) <= tol;
    std::cout << (ok ? "pass" : "FAIL") << "  " << name
              << "  residual=" << num(residual) << " tol=" << num(tol) << "\n";
    if (!ok) {
      std::cerr << "verify failed: " << name << "\n";
      ++failures;
    }
  };

  struct Case {
    const char* name;
    TabularMdp mdp;
  };
  std::vector<Case> cases = {{"two_cells", toy_two_cells()},
                             {"four_workers", toy_four_workers()},
                             {"deep", toy_deep()}};
  for (const Case& c : cases) {
    LevelPolicies uni = uniform_policies(c.mdp);
    LevelPolicies tilt = tilted_policies(c.mdp, 0.3);
    AlignmentReport ev = evaluate_policy(c.mdp, uni, gamma);
    check(std::string("theorem1/") + c.name, ev.thm1_residual, 1e-9);
    AlignmentReport lm = verify_lemma1(c.mdp, tilt, uni, gamma);
    check(std::string("lemma1/") + c.name, lm.lemma_residual, 1e-9);
    if (c.mdp.K == 1) {
      AlignmentReport t2 = verify_theorem2(c.mdp, tilt, uni, 1.0 - 1e-6);
      check(std::string("theorem2/") + c.name, t2.thm2_residual, 1e-6);
      if (c.mdp.alpha == 1) {
        AlignmentReport t3 = verify_theorem3(c.mdp, tilt, uni, 1.0 - 1e-6);
        check(std::string("theorem3/") + c.name, t3.thm3_residual, 1e-6);
      }
    }
  }

  // precondition violation must be flagged, not silently passed
  {
    TabularMdp bad = toy_nonhomogeneous();
    AlignmentReport ev = evaluate_policy(bad, tilted_policies(bad, 0.3), gamma);
    bool flagged = !ev.homogeneous;
    std::cout << (flagged ? "pass" : "FAIL")
              << "  theorem1/nonhomogeneous flagged, residual="
              << num(ev.thm1_residual) << "\n";
    if (!flagged) {
      std::cerr << "verify failed: theorem1/nonhomogeneous not flagged\n";
      ++failures;
    }
  }
  return failures == 0 ? 0 : 1;
}

int do_gradcheck(const RunConfig& cfg) {
  auto env = make_env(cfg);
  Model model = make_model(cfg, *env);
  double worst = 0.0;
  const int trials = 5;
  for (int i = 0; i < trials; ++i) {
    std::map<std::string, double> groups;
    double rel = gradient_check(model, *env, cfg.seed + static_cast<uint64_t>(i),
                                400, &groups);
    std::cout << "trial " << i << " max_rel_err=" << num(rel) << "\n";
    for (const auto& [g, r] : groups)
      std::cout << "  " << g << ": " << num(r) << "\n";
    worst = std::max(worst, rel);
  }
  std::cout << (worst < 1e-4 ? "pass" : "FAIL")
            << "  gradcheck worst=" << num(worst) << "\n";
  return worst < 1e-4 ? 0 : 1;
}

}  // namespace

std::unique_ptr<Env> make_env(const RunConfig& cfg) {
  if (cfg.env == "lbfws")
    return std::make_unique<LbfwsEnv>(LbfwsConfig::preset(cfg.preset));
  return std::make_unique<SamplingEnv>(SamplingConfig::preset(cfg.preset));
}

Model make_model(const RunConfig& cfg, const Env& env) {
  ModelSpec spec;
  spec.hier.levels = cfg.levels;
  spec.hier.alpha = cfg.alpha;
  spec.hier.K = cfg.K;
  spec.hier.dynamic = cfg.dynamic;
  spec.hier.rule =
      cfg.levels == 3 ? AssignRule::quadrant : AssignRule::single_manager;
  spec.latent.embed_dim = cfg.embed_dim;
  spec.latent.rounds = cfg.rounds;
  spec.latent.worker_msg = cfg.msg == "gcn" ? MsgKind::gcn : MsgKind::mlp;
  spec.topology = variant_topology(cfg.variant);
  spec.actor_hidden = {cfg.actor_hidden};
  spec.critic_hidden = {cfg.critic_hidden};
  return Model(spec, env);
}

void write_replay(const std::string& path, const EpisodeData& ep) {
  std::ofstream out(path);
  for (size_t t = 0; t < ep.actions.size(); ++t) {
    json rec;
    rec["step"] = t;
    json pos = json::array();
    for (const Pos& p : ep.positions[t]) pos.push_back({p.x, p.y});
    rec["positions"] = std::move(pos);
    rec["actions"] = ep.actions[t];
    rec["rewards"] = ep.ro.ext[t];
    out << rec.dump() << "\n";
  }
}

int run_command(const std::string& subcommand, const RunConfig& cfg) {
  if (subcommand == "train") return do_train(cfg);
  if (subcommand == "eval") return do_eval(cfg);
  if (subcommand == "verify") return do_verify(cfg);
  if (subcommand == "gradcheck") return do_gradcheck(cfg);
  std::cerr << "unknown subcommand: " << subcommand << "\n";
  return 2;
}

}  // namespace himpp
