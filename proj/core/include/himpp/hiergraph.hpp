#pragma once

#include "himpp/common.hpp"

namespace himpp {

struct Pos {
  double x = 0.0;
  double y = 0.0;
};

enum class AssignRule { single_manager, quadrant };
enum class DistanceMetric { euclidean, chebyshev };

// Shape of the feudal hierarchy plus its temporal scales: sub-managers act
// every `alpha` environment steps, the manager every `K * alpha`.
struct HierarchySpec {
  int levels = 2;  // 2 or 3
  int alpha = 5;
  int K = 1;
  AssignRule rule = AssignRule::single_manager;
  bool dynamic = false;
  double comm_range = 0.75;
  DistanceMetric metric = DistanceMetric::euclidean;

  int manager_period() const { return levels == 2 ? alpha : K * alpha; }
  void validate() const;
};

constexpr int kNumQuadrants = 4;

// Per-step feudal structure: worker proximity edges, the worker -> sub-manager
// partition, a complete sub-manager clique and a single manager on top.
struct HierGraph {
  int num_workers = 0;
  int num_submanagers = 0;  // 0 in a 2-level hierarchy
  std::vector<std::vector<int>> worker_adj;  // sorted neighbor lists
  std::vector<int> cell_of_worker;           // sub-manager index, empty for 2-level
  std::vector<Vec> submanager_tag;           // one-hot, distinct basis vectors

  std::vector<std::vector<int>> cells() const;  // workers grouped by sub-manager
  bool operator==(const HierGraph&) const = default;
};

// Edge (i, j) iff i != j and distance(i, j) <= range.
std::vector<std::vector<int>> build_worker_graph(const std::vector<Pos>& positions,
                                                 double range,
                                                 DistanceMetric metric);

// Quadrant index q = [x >= 0] + 2 * [y >= 0]; boundaries go to the
// non-negative side.
std::vector<int> assign_partitions(const std::vector<Pos>& positions);

HierGraph build_hierarchy(const HierarchySpec& spec,
                          const std::vector<Pos>& positions);

// Episode-scoped builder honoring the dynamic flag: with dynamic=false every
// per-step graph is the t=0 graph.
class GraphProvider {
 public:
  explicit GraphProvider(HierarchySpec spec) : spec_(std::move(spec)) {}

  const HierGraph& step(const std::vector<Pos>& positions) {
    if (!frozen_ || spec_.dynamic) {
      graph_ = build_hierarchy(spec_, positions);
      frozen_ = true;
    }
    return graph_;
  }
  void reset() { frozen_ = false; }
  const HierarchySpec& spec() const { return spec_; }

 private:
  HierarchySpec spec_;
  HierGraph graph_;
  bool frozen_ = false;
};

}  // namespace himpp
