#pragma once

// Random rollout generator shared by the reward tests.

#include "himpp/rewards.hpp"

namespace himpp::testutil {

inline Rollout random_rollout(Rng& rng, int levels, int K, int alpha,
                              bool frozen_cells = false) {
  Rollout ro;
  ro.levels = levels;
  ro.K = levels == 3 ? K : 1;
  ro.alpha = alpha;
  ro.W = rng.uniform_int(2, 6);
  const int period = ro.manager_period();
  // a few complete intervals plus sometimes a ragged tail
  ro.T = period * rng.uniform_int(1, 4) + rng.uniform_int(0, period - 1);

  std::vector<int> frozen(static_cast<size_t>(ro.W));
  for (int& c : frozen) c = rng.uniform_int(0, ro.num_cells - 1);
  for (int t = 0; t < ro.T; ++t) {
    Vec ext(static_cast<size_t>(ro.W));
    for (double& x : ext) x = rng.normal();
    ro.ext.push_back(std::move(ext));
    if (levels == 3) {
      std::vector<int> cell(static_cast<size_t>(ro.W));
      for (int w = 0; w < ro.W; ++w)
        cell[static_cast<size_t>(w)] =
            frozen_cells ? frozen[static_cast<size_t>(w)]
                         : rng.uniform_int(0, ro.num_cells - 1);
      ro.cell.push_back(std::move(cell));
    }
  }
  const int B = ro.num_manager_boundaries();
  const int cols = levels == 3 ? ro.num_cells : ro.W;
  for (int b = 0; b < B; ++b) {
    Vec v(static_cast<size_t>(cols));
    for (double& x : v) x = rng.normal();
    ro.value_m.push_back(std::move(v));
  }
  if (levels == 3) {
    const int Kb = ro.num_sub_boundaries();
    for (int k = 0; k < Kb; ++k) {
      Vec v(static_cast<size_t>(ro.W));
      for (double& x : v) x = rng.normal();
      ro.value_s.push_back(std::move(v));
    }
  }
  return ro;
}

}  // namespace himpp::testutil
