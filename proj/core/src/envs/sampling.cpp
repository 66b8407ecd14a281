#include "himpp/envs/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace himpp {

SamplingConfig SamplingConfig::preset(const std::string& name) {
  SamplingConfig c;
  if (name == "default") {
    // struct defaults
  } else if (name == "mini") {
    c.num_agents = 3;
    c.T = 100;
  } else {
    throw StructuralError("unknown sampling preset: " + name);
  }
  return c;
}

SamplingEnv::SamplingEnv(SamplingConfig cfg) : cfg_(cfg) {
  HIMPP_CHECK(cfg_.num_agents >= 1 && cfg_.cells >= 2 && cfg_.modes >= 1,
              "sampling config");
}

int SamplingEnv::cell_index(double coord) const {
  int c = static_cast<int>((coord + 1.0) / 2.0 * cfg_.cells);
  return std::clamp(c, 0, cfg_.cells - 1);
}

double SamplingEnv::cell_mass(int cx, int cy) const {
  const double cell_w = 2.0 / cfg_.cells;
  double x = -1.0 + (cx + 0.5) * cell_w;
  double y = -1.0 + (cy + 0.5) * cell_w;
  const double s2 = cfg_.mode_sigma * cfg_.mode_sigma;
  const double norm = 1.0 / (2.0 * M_PI * s2 * static_cast<double>(means_.size()));
  double density = 0.0;
  for (const Pos& m : means_) {
    double dx = x - m.x, dy = y - m.y;
    density += norm * std::exp(-(dx * dx + dy * dy) / (2.0 * s2));
  }
  return density * cell_w * cell_w;
}

bool SamplingEnv::visited(int cx, int cy) const {
  return visited_[static_cast<size_t>(cy) * cfg_.cells + cx] != 0;
}

void SamplingEnv::reset(Rng& rng) {
  const size_t n = static_cast<size_t>(cfg_.num_agents);
  px_.resize(n);
  py_.resize(n);
  vx_.assign(n, 0.0);
  vy_.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    px_[i] = rng.uniform(-1.0, 1.0);
    py_[i] = rng.uniform(-1.0, 1.0);
  }
  means_.resize(static_cast<size_t>(cfg_.modes));
  for (Pos& m : means_) {
    m.x = rng.uniform(-cfg_.mode_span, cfg_.mode_span);
    m.y = rng.uniform(-cfg_.mode_span, cfg_.mode_span);
  }
  visited_.assign(static_cast<size_t>(cfg_.cells) * cfg_.cells, 0);
  t_ = 0;
  done_ = false;
}

void SamplingEnv::set_state(const std::vector<Pos>& positions,
                            const std::vector<Pos>& velocities,
                            const std::vector<Pos>& mode_means, int t) {
  const int n = static_cast<int>(positions.size());
  HIMPP_CHECK(velocities.size() == positions.size(), "state size mismatch");
  cfg_.num_agents = n;
  px_.resize(static_cast<size_t>(n));
  py_.resize(static_cast<size_t>(n));
  vx_.resize(static_cast<size_t>(n));
  vy_.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    px_[static_cast<size_t>(i)] = positions[static_cast<size_t>(i)].x;
    py_[static_cast<size_t>(i)] = positions[static_cast<size_t>(i)].y;
    vx_[static_cast<size_t>(i)] = velocities[static_cast<size_t>(i)].x;
    vy_[static_cast<size_t>(i)] = velocities[static_cast<size_t>(i)].y;
  }
  means_ = mode_means;
  visited_.assign(static_cast<size_t>(cfg_.cells) * cfg_.cells, 0);
  t_ = t;
  done_ = false;
}

std::vector<Pos> SamplingEnv::positions() const {
  std::vector<Pos> out(px_.size());
  for (size_t i = 0; i < px_.size(); ++i) out[i] = {px_[i], py_[i]};
  return out;
}

void SamplingEnv::describe_obs(LatentConfig& cfg) const {
  cfg.grid_obs = false;
  cfg.vec_obs_dim = 4 + 9 + 9;
}

RawObs SamplingEnv::observe(int agent) const {
  const size_t i = static_cast<size_t>(agent);
  RawObs obs;
  obs.vec.reserve(22);
  obs.vec.push_back(px_[i]);
  obs.vec.push_back(py_[i]);
  obs.vec.push_back(vx_[i]);
  obs.vec.push_back(vy_[i]);
  const int cx = cell_index(px_[i]);
  const int cy = cell_index(py_[i]);
  // 3x3 neighborhood of visited flags, then of density mass; out-of-arena
  // cells read as visited with zero mass.
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      int x = cx + dx, y = cy + dy;
      bool in = x >= 0 && x < cfg_.cells && y >= 0 && y < cfg_.cells;
      obs.vec.push_back(in ? (visited(x, y) ? 1.0 : 0.0) : 1.0);
    }
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      int x = cx + dx, y = cy + dy;
      bool in = x >= 0 && x < cfg_.cells && y >= 0 && y < cfg_.cells;
      obs.vec.push_back(in ? cell_mass(x, y) : 0.0);
    }
  return obs;
}

StepResult SamplingEnv::step(const std::vector<Vec>& actions) {
  HIMPP_CHECK(!done_, "step on finished episode");
  const int n = cfg_.num_agents;
  HIMPP_CHECK(static_cast<int>(actions.size()) == n, "one action per agent");
  StepResult res;
  res.rewards.assign(static_cast<size_t>(n), 0.0);

  for (int i = 0; i < n; ++i) {
    const size_t ii = static_cast<size_t>(i);
    const Vec& a = actions[ii];
    HIMPP_CHECK(a.size() == 2 && all_finite(a), "malformed sampling action");
    vx_[ii] = cfg_.max_speed * std::tanh(a[0]);
    vy_[ii] = cfg_.max_speed * std::tanh(a[1]);
    px_[ii] = std::clamp(px_[ii] + cfg_.dt * vx_[ii], -1.0, 1.0);
    py_[ii] = std::clamp(py_[ii] + cfg_.dt * vy_[ii], -1.0, 1.0);
  }

  // First visit collects the cell's mass; simultaneous arrivals pay the
  // lowest-indexed robot.
  for (int i = 0; i < n; ++i) {
    const size_t ii = static_cast<size_t>(i);
    int cx = cell_index(px_[ii]);
    int cy = cell_index(py_[ii]);
    size_t ci = static_cast<size_t>(cy) * cfg_.cells + cx;
    if (visited_[ci]) continue;
    visited_[ci] = 1;
    res.rewards[ii] += cell_mass(cx, cy);
  }

  ++t_;
  res.done = t_ >= cfg_.T;
  done_ = res.done;
  return res;
}

}  // namespace himpp
