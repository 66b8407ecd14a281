#include "himpp/envs/lbfws.hpp"

#include <algorithm>

namespace himpp {

LbfwsConfig LbfwsConfig::preset(const std::string& name) {
  LbfwsConfig c;
  if (name == "easy") {
    c.grid = 9; c.num_agents = 10; c.food_level1 = 4; c.food_level2 = 4;
  } else if (name == "medium") {
    c.grid = 12; c.num_agents = 10; c.food_level1 = 5; c.food_level2 = 5;
  } else if (name == "hard") {
    c.grid = 15; c.num_agents = 10; c.food_level1 = 6; c.food_level2 = 6;
  } else if (name == "mini") {
    c.grid = 5; c.num_agents = 2; c.food_level1 = 2; c.food_level2 = 0;
    c.T = 150; c.T_s = 60;
  } else {
    throw StructuralError("unknown lbfws preset: " + name);
  }
  return c;
}

LbfwsEnv::LbfwsEnv(LbfwsConfig cfg) : cfg_(cfg) {
  HIMPP_CHECK(cfg_.grid >= 3 && cfg_.num_agents >= 1, "lbfws config");
}

bool LbfwsEnv::occupied(int x, int y, int ignore_agent) const {
  if (x == lx_ && y == ly_) return true;
  for (size_t i = 0; i < ax_.size(); ++i)
    if (static_cast<int>(i) != ignore_agent && ax_[i] == x && ay_[i] == y)
      return true;
  for (const Food& f : food_)
    if (f.alive && f.x == x && f.y == y) return true;
  return false;
}

void LbfwsEnv::reset(Rng& rng) {
  const int n = cfg_.num_agents;
  ax_.assign(static_cast<size_t>(n), 0);
  ay_.assign(static_cast<size_t>(n), 0);
  agent_level_.assign(static_cast<size_t>(n), 1);
  carry_.assign(static_cast<size_t>(n), -1);
  food_.clear();
  lx_ = cfg_.grid / 2;
  ly_ = cfg_.grid / 2;
  t_ = 0;
  t_s_ = cfg_.T_s;
  done_ = false;

  auto place = [&](int& x, int& y) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
      int cx = rng.uniform_int(0, cfg_.grid - 1);
      int cy = rng.uniform_int(0, cfg_.grid - 1);
      if (!occupied(cx, cy)) { x = cx; y = cy; return; }
    }
    throw StructuralError("infeasible placement after bounded retries");
  };
  for (int i = 0; i < n; ++i) place(ax_[static_cast<size_t>(i)], ay_[static_cast<size_t>(i)]);
  for (int i = 0; i < cfg_.food_level1 + cfg_.food_level2; ++i) {
    Food f;
    f.level = i < cfg_.food_level1 ? 1 : 2;
    f.alive = true;
    food_.push_back(f);
    place(food_.back().x, food_.back().y);
  }
  spawn_rng_ = Rng(rng.next_u64());
}

// Consumed items come back elsewhere: appends a fresh item of the same level
// at a random free cell (keeps dead slots so carried-item indices stay valid).
void LbfwsEnv::respawn(int level) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    int cx = spawn_rng_.uniform_int(0, cfg_.grid - 1);
    int cy = spawn_rng_.uniform_int(0, cfg_.grid - 1);
    if (occupied(cx, cy)) continue;
    food_.push_back({cx, cy, level, true});
    return;
  }
  throw StructuralError("infeasible placement after bounded retries");
}

void LbfwsEnv::set_state(const std::vector<Pos>& agents,
                         const std::vector<Food>& food, int t, int t_s) {
  const int n = static_cast<int>(agents.size());
  cfg_.num_agents = n;
  ax_.resize(static_cast<size_t>(n));
  ay_.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    ax_[static_cast<size_t>(i)] = static_cast<int>(agents[static_cast<size_t>(i)].x);
    ay_[static_cast<size_t>(i)] = static_cast<int>(agents[static_cast<size_t>(i)].y);
  }
  agent_level_.assign(static_cast<size_t>(n), 1);
  carry_.assign(static_cast<size_t>(n), -1);
  food_ = food;
  lx_ = cfg_.grid / 2;
  ly_ = cfg_.grid / 2;
  t_ = t;
  t_s_ = t_s;
  done_ = false;
  spawn_rng_ = Rng(0x5eedull);
}

std::vector<Pos> LbfwsEnv::positions() const {
  // Centered on the landmark so the quadrant partition splits around it.
  std::vector<Pos> out(ax_.size());
  for (size_t i = 0; i < ax_.size(); ++i)
    out[i] = {static_cast<double>(ax_[i] - lx_), static_cast<double>(ay_[i] - ly_)};
  return out;
}

void LbfwsEnv::describe_obs(LatentConfig& cfg) const {
  const int side = 2 * cfg_.sight + 1;
  cfg.grid_obs = true;
  cfg.conv.in_channels = 3;
  cfg.conv.height = side;
  cfg.conv.width = side;
  cfg.aux_dim = 4;
}

RawObs LbfwsEnv::observe(int agent) const {
  const int side = 2 * cfg_.sight + 1;
  const size_t layer = static_cast<size_t>(side) * side;
  RawObs obs;
  obs.grid.assign(3 * layer, 0.0);
  const int axp = ax_[static_cast<size_t>(agent)];
  const int ayp = ay_[static_cast<size_t>(agent)];
  auto idx = [&](int layer_id, int gx, int gy) -> int {
    int ox = gx - axp + cfg_.sight;
    int oy = gy - ayp + cfg_.sight;
    if (ox < 0 || ox >= side || oy < 0 || oy >= side) return -1;
    return layer_id * static_cast<int>(layer) + oy * side + ox;
  };
  for (size_t i = 0; i < ax_.size(); ++i) {
    int j = idx(0, ax_[i], ay_[i]);
    if (j >= 0) obs.grid[static_cast<size_t>(j)] = agent_level_[i];
    // carry flags live in the landmark layer
    if (carry_[i] >= 0 && j >= 0) {
      int jc = idx(2, ax_[i], ay_[i]);
      obs.grid[static_cast<size_t>(jc)] =
          food_value(food_[static_cast<size_t>(carry_[i])].level);
    }
  }
  for (const Food& f : food_) {
    int j = idx(1, f.x, f.y);
    if (f.alive && j >= 0) obs.grid[static_cast<size_t>(j)] = f.level;
  }
  int jl = idx(2, lx_, ly_);
  if (jl >= 0) obs.grid[static_cast<size_t>(jl)] += 1.0;

  obs.vec = {static_cast<double>(t_) / cfg_.T,
             static_cast<double>(t_s_) / cfg_.T_s,
             static_cast<double>(lx_ - axp) / cfg_.grid,
             static_cast<double>(ly_ - ayp) / cfg_.grid};
  return obs;
}

StepResult LbfwsEnv::step(const std::vector<Vec>& actions) {
  HIMPP_CHECK(!done_, "step on finished episode");
  const int n = cfg_.num_agents;
  HIMPP_CHECK(static_cast<int>(actions.size()) == n, "one action per agent");
  StepResult res;
  res.rewards.assign(static_cast<size_t>(n), 0.0);

  std::vector<int> act(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    double a = actions[static_cast<size_t>(i)][0];
    int ai = static_cast<int>(a);
    HIMPP_CHECK(ai >= 0 && ai < kNumLbfwsActions && a == ai,
                "malformed lbfws action id");
    act[static_cast<size_t>(i)] = ai;
  }

  // Movement phase: conflicts (target occupied, or two agents targeting the
  // same cell) resolve to no-op for everyone involved.
  std::vector<int> tx = ax_, ty = ay_;
  for (int i = 0; i < n; ++i) {
    int dx = 0, dy = 0;
    switch (act[static_cast<size_t>(i)]) {
      case kUp: dy = -1; break;
      case kDown: dy = 1; break;
      case kLeft: dx = -1; break;
      case kRight: dx = 1; break;
      default: continue;
    }
    int nx = ax_[static_cast<size_t>(i)] + dx;
    int ny = ay_[static_cast<size_t>(i)] + dy;
    if (in_grid(nx, ny) && !occupied(nx, ny, i)) {
      tx[static_cast<size_t>(i)] = nx;
      ty[static_cast<size_t>(i)] = ny;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (tx[static_cast<size_t>(i)] == tx[static_cast<size_t>(j)] &&
          ty[static_cast<size_t>(i)] == ty[static_cast<size_t>(j)]) {
        tx[static_cast<size_t>(i)] = ax_[static_cast<size_t>(i)];
        ty[static_cast<size_t>(i)] = ay_[static_cast<size_t>(i)];
        tx[static_cast<size_t>(j)] = ax_[static_cast<size_t>(j)];
        ty[static_cast<size_t>(j)] = ay_[static_cast<size_t>(j)];
      }
  ax_ = tx;
  ay_ = ty;

  // 4-neighborhood adjacency, as in the original level-based foraging rules
  auto adjacent = [&](int i, const Food& f) {
    return f.alive && std::abs(ax_[static_cast<size_t>(i)] - f.x) +
                              std::abs(ay_[static_cast<size_t>(i)] - f.y) <= 1;
  };
  auto nearest_adjacent_food = [&](int i) -> int {
    for (size_t fi = 0; fi < food_.size(); ++fi)
      if (adjacent(i, food_[fi])) return static_cast<int>(fi);
    return -1;
  };

  // Eat: carried items are consumed outright; ground items need the summed
  // level of all participants and split their value evenly.
  std::vector<std::vector<int>> eaters(food_.size());
  for (int i = 0; i < n; ++i) {
    if (act[static_cast<size_t>(i)] != kEat) continue;
    if (carry_[static_cast<size_t>(i)] >= 0) {
      int level = food_[static_cast<size_t>(carry_[static_cast<size_t>(i)])].level;
      res.rewards[static_cast<size_t>(i)] += food_value(level);
      carry_[static_cast<size_t>(i)] = -1;
      respawn(level);
      continue;
    }
    int fi = nearest_adjacent_food(i);
    // items respawned this very step are not edible until the next one
    if (fi >= 0 && static_cast<size_t>(fi) < eaters.size())
      eaters[static_cast<size_t>(fi)].push_back(i);
  }
  for (size_t fi = 0; fi < eaters.size(); ++fi) {
    if (eaters[fi].empty()) continue;
    int level_sum = 0;
    for (int i : eaters[fi]) level_sum += agent_level_[static_cast<size_t>(i)];
    if (level_sum < food_[fi].level) continue;
    int level = food_[fi].level;
    double share = food_value(level) / static_cast<double>(eaters[fi].size());
    for (int i : eaters[fi]) res.rewards[static_cast<size_t>(i)] += share;
    food_[fi].alive = false;
    respawn(level);
  }

  // Pick: solo, needs a free carry slot and sufficient level; ties on the same
  // item go to the lowest-indexed agent, the rest are canceled.
  for (int i = 0; i < n; ++i) {
    if (act[static_cast<size_t>(i)] != kPick) continue;
    if (carry_[static_cast<size_t>(i)] >= 0) continue;  // automatically canceled
    int fi = nearest_adjacent_food(i);
    if (fi < 0) continue;
    if (agent_level_[static_cast<size_t>(i)] < food_[static_cast<size_t>(fi)].level) continue;
    food_[static_cast<size_t>(fi)].alive = false;
    carry_[static_cast<size_t>(i)] = fi;
  }

  // Delivery at the landmark: extends survival, yields no reward.
  for (int i = 0; i < n; ++i) {
    if (act[static_cast<size_t>(i)] != kDeliver) continue;
    int ci = carry_[static_cast<size_t>(i)];
    if (ci < 0) continue;
    if (std::abs(ax_[static_cast<size_t>(i)] - lx_) +
            std::abs(ay_[static_cast<size_t>(i)] - ly_) > 1)
      continue;
    int level = food_[static_cast<size_t>(ci)].level;
    t_s_ += static_cast<int>(food_value(level)) * cfg_.k_surv;
    carry_[static_cast<size_t>(i)] = -1;
    respawn(level);
  }

  ++t_;
  --t_s_;
  res.done = t_s_ <= 0 || t_ >= cfg_.T;
  done_ = res.done;
  return res;
}

}  // namespace himpp
