#include "himpp/hiergraph.hpp"

namespace himpp {

void HierarchySpec::validate() const {
  HIMPP_CHECK(levels == 2 || levels == 3, "hierarchy levels must be 2 or 3");
  HIMPP_CHECK(alpha >= 1, "alpha must be positive");
  HIMPP_CHECK(K >= 1, "K must be positive");
  HIMPP_CHECK(comm_range >= 0.0, "communication range must be non-negative");
  if (levels == 3)
    HIMPP_CHECK(rule == AssignRule::quadrant,
                "3-level hierarchies use the quadrant assignment rule");
}

std::vector<std::vector<int>> HierGraph::cells() const {
  std::vector<std::vector<int>> out(static_cast<size_t>(num_submanagers));
  for (int w = 0; w < num_workers; ++w)
    out[static_cast<size_t>(cell_of_worker[static_cast<size_t>(w)])].push_back(w);
  return out;
}

std::vector<std::vector<int>> build_worker_graph(const std::vector<Pos>& positions,
                                                 double range,
                                                 DistanceMetric metric) {
  const int n = static_cast<int>(positions.size());
  for (const Pos& p : positions)
    HIMPP_CHECK(std::isfinite(p.x) && std::isfinite(p.y), "non-finite position");
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double dx = positions[static_cast<size_t>(i)].x - positions[static_cast<size_t>(j)].x;
      double dy = positions[static_cast<size_t>(i)].y - positions[static_cast<size_t>(j)].y;
      double dist = metric == DistanceMetric::euclidean
                        ? std::sqrt(dx * dx + dy * dy)
                        : std::max(std::fabs(dx), std::fabs(dy));
      if (dist <= range) {
        adj[static_cast<size_t>(i)].push_back(j);
        adj[static_cast<size_t>(j)].push_back(i);
      }
    }
  return adj;
}

std::vector<int> assign_partitions(const std::vector<Pos>& positions) {
  std::vector<int> cell(positions.size());
  for (size_t w = 0; w < positions.size(); ++w)
    cell[w] = (positions[w].x >= 0.0 ? 1 : 0) + 2 * (positions[w].y >= 0.0 ? 1 : 0);
  return cell;
}

HierGraph build_hierarchy(const HierarchySpec& spec,
                          const std::vector<Pos>& positions) {
  spec.validate();
  HierGraph g;
  g.num_workers = static_cast<int>(positions.size());
  g.worker_adj = build_worker_graph(positions, spec.comm_range, spec.metric);
  if (spec.levels == 3) {
    g.num_submanagers = kNumQuadrants;
    g.cell_of_worker = assign_partitions(positions);
    g.submanager_tag.resize(kNumQuadrants);
    for (int s = 0; s < kNumQuadrants; ++s) {
      g.submanager_tag[static_cast<size_t>(s)].assign(kNumQuadrants, 0.0);
      g.submanager_tag[static_cast<size_t>(s)][static_cast<size_t>(s)] = 1.0;
    }
  }
  return g;
}

}  // namespace himpp
