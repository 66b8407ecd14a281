// Microbenchmarks for the hot paths: the latent forward/backward pass, the
// reward assignment pipeline and the optimizer step.
#include <benchmark/benchmark.h>

#include "himpp/msgpass.hpp"
#include "himpp/rewards.hpp"

namespace {

using namespace himpp;

struct LatentFixture {
  ParamStore ps;
  LatentModel model;
  HierGraph g;
  std::vector<RawObs> obs;
  std::vector<Vec> mgr_goals, sub_goals;

  LatentFixture() {
    LatentConfig cfg;
    cfg.embed_dim = 32;
    cfg.levels = 3;
    cfg.vec_obs_dim = 22;
    model = LatentModel("net", cfg);
    Rng rng(7);
    model.init(ps, rng);

    const int W = 10;
    std::vector<Pos> pos(W);
    for (Pos& p : pos) {
      p.x = rng.uniform(-1.0, 1.0);
      p.y = rng.uniform(-1.0, 1.0);
    }
    HierarchySpec spec;
    spec.levels = 3;
    spec.rule = AssignRule::quadrant;
    g = build_hierarchy(spec, pos);

    obs.resize(W);
    for (RawObs& o : obs) {
      o.vec.resize(22);
      for (double& x : o.vec) x = rng.normal();
    }
    mgr_goals.assign(kNumQuadrants, Vec(32, 0.1));
    sub_goals.assign(W, Vec(32, 0.1));
  }
};

void bm_latent_forward(benchmark::State& state) {
  LatentFixture f;
  for (auto _ : state) {
    StepLatent lat = f.model.run(f.ps, f.g, f.obs, f.mgr_goals, f.sub_goals);
    benchmark::DoNotOptimize(lat.value(lat.worker_obs[0])[0]);
  }
}
BENCHMARK(bm_latent_forward);

void bm_latent_backward(benchmark::State& state) {
  LatentFixture f;
  for (auto _ : state) {
    StepLatent lat = f.model.run(f.ps, f.g, f.obs, f.mgr_goals, f.sub_goals);
    std::vector<std::pair<int, Vec>> seeds;
    Vec seed(lat.value(lat.worker_obs[0]).size(), 1.0);
    seeds.emplace_back(lat.worker_obs[0], seed);
    lat.tape->backward(seeds);
    benchmark::DoNotOptimize(f.ps.params().begin()->second.grad[0]);
    f.ps.zero_grad();
  }
}
BENCHMARK(bm_latent_backward);

Rollout make_rollout(int T, int W, Rng& rng) {
  Rollout ro;
  ro.T = T;
  ro.W = W;
  ro.levels = 3;
  ro.alpha = 5;
  ro.K = 2;
  for (int t = 0; t < T; ++t) {
    Vec ext(static_cast<size_t>(W));
    std::vector<int> cell(static_cast<size_t>(W));
    for (int w = 0; w < W; ++w) {
      ext[static_cast<size_t>(w)] = rng.normal();
      cell[static_cast<size_t>(w)] = rng.uniform_int(0, 3);
    }
    ro.ext.push_back(std::move(ext));
    ro.cell.push_back(std::move(cell));
  }
  int B = ro.num_manager_boundaries();
  for (int b = 0; b < B; ++b)
    ro.value_m.push_back(Vec(static_cast<size_t>(ro.num_cells), rng.normal()));
  int Kb = ro.num_sub_boundaries();
  for (int k = 0; k < Kb; ++k)
    ro.value_s.push_back(Vec(static_cast<size_t>(W), rng.normal()));
  return ro;
}

void bm_reward_pipeline(benchmark::State& state) {
  Rng rng(11);
  Rollout ro = make_rollout(200, 10, rng);
  RewardFlags flags;
  TruncationScheme trunc{TruncationVariant::worker_scale, 1};
  for (auto _ : state) {
    ManagerRewards mr = manager_rewards(ro);
    auto mgr_adv = manager_advantages(ro, mr, 0.99);
    auto sub_r = submanager_rewards(ro, mgr_adv, flags);
    auto r_w = worker_rewards_dynamic(ro, sub_r, trunc, 0.99, flags);
    benchmark::DoNotOptimize(r_w[0][0]);
  }
}
BENCHMARK(bm_reward_pipeline);

void bm_adam_step(benchmark::State& state) {
  LatentFixture f;
  StepLatent lat = f.model.run(f.ps, f.g, f.obs, f.mgr_goals, f.sub_goals);
  std::vector<std::pair<int, Vec>> seeds;
  seeds.emplace_back(lat.worker_obs[0],
                     Vec(lat.value(lat.worker_obs[0]).size(), 1.0));
  lat.tape->backward(seeds);
  for (auto _ : state) {
    f.ps.adam_step(1e-4);
  }
}
BENCHMARK(bm_adam_step);

}  // namespace

BENCHMARK_MAIN();
