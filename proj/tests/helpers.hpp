#pragma once

// Instance builders shared by the unit tests and the acceptance harness.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "obsnet/combinatorial.hpp"
#include "obsnet/flows.hpp"
#include "obsnet/graph_model.hpp"
#include "obsnet/pipeline.hpp"

namespace obsnet::testhelp {

struct EdgeSpec {
  Role tail_role;
  int tail;
  Role head_role;
  int head;
  const char* cost;  // decimal text, input units
};

inline PhysicalGraph make_graph(int n_sensors, int n_backbone,
                                const std::vector<EdgeSpec>& edges) {
  PhysicalGraph g;
  for (int i = 0; i < n_sensors; ++i) g.sensor_names.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i < n_backbone; ++i) g.backbone_names.push_back("q" + std::to_string(i + 1));
  int id = 0;
  for (const EdgeSpec& e : edges)
    g.edges.push_back(
        {{e.tail_role, e.tail}, {e.head_role, e.head}, cost_from_string(e.cost), id++});
  validate_physical_graph(g);
  return g;
}

// x1->q1 (2), q1->z (1): one sensor, one route.
inline PhysicalGraph chain_graph() {
  return make_graph(1, 1,
                    {{Role::Sensor, 0, Role::Backbone, 0, "2"},
                     {Role::Backbone, 0, Role::Fusion, 0, "1"}});
}

// x1->q1 (2), x1->q2 (5), q1->z (1), q2->z (1): one sensor, two disjoint routes.
inline PhysicalGraph twin_route_graph() {
  return make_graph(1, 2,
                    {{Role::Sensor, 0, Role::Backbone, 0, "2"},
                     {Role::Sensor, 0, Role::Backbone, 1, "5"},
                     {Role::Backbone, 0, Role::Fusion, 0, "1"},
                     {Role::Backbone, 1, Role::Fusion, 0, "1"}});
}

// x2->x1 (1), x1->q1 (2), q1->z (1): x2 relays through x1.
inline PhysicalGraph relay_graph() {
  return make_graph(2, 1,
                    {{Role::Sensor, 1, Role::Sensor, 0, "1"},
                     {Role::Sensor, 0, Role::Backbone, 0, "2"},
                     {Role::Backbone, 0, Role::Fusion, 0, "1"}});
}

struct InstanceLimits {
  int max_sensors = 5;
  int max_backbone = 2;
  int max_edges = 12;
  int max_cost = 9;  // integer input units
};

/// One random draw over role-admissible edges; may be infeasible.
inline PhysicalGraph random_instance(rng& r, const InstanceLimits& lim) {
  int nx = 1 + static_cast<int>(r.next_below(lim.max_sensors));
  int nq = 1 + static_cast<int>(r.next_below(lim.max_backbone));
  struct Cand {
    NodeId tail, head;
  };
  std::vector<Cand> chosen;
  auto maybe = [&](NodeId t, NodeId h, double prob) {
    if (r.next_unit() < prob) chosen.push_back({t, h});
  };
  for (int i = 0; i < nq; ++i) maybe({Role::Backbone, i}, {Role::Fusion, 0}, 0.8);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nq; ++j) maybe({Role::Sensor, i}, {Role::Backbone, j}, 0.55);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nx; ++j)
      if (i != j) maybe({Role::Sensor, i}, {Role::Sensor, j}, 0.3);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < nq; ++j)
      if (i != j) maybe({Role::Backbone, i}, {Role::Backbone, j}, 0.35);
  for (int i = static_cast<int>(chosen.size()) - 1; i > 0; --i)
    std::swap(chosen[i], chosen[static_cast<int>(r.next_below(i + 1))]);
  if (static_cast<int>(chosen.size()) > lim.max_edges) chosen.resize(lim.max_edges);
  // occasional parallel link, to exercise duplicate handling
  if (!chosen.empty() && static_cast<int>(chosen.size()) < lim.max_edges &&
      r.next_unit() < 0.25)
    chosen.push_back(chosen[r.next_below(chosen.size())]);

  PhysicalGraph g;
  for (int i = 0; i < nx; ++i) g.sensor_names.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i < nq; ++i) g.backbone_names.push_back("q" + std::to_string(i + 1));
  int id = 0;
  for (const Cand& c : chosen) {
    std::int64_t units = static_cast<std::int64_t>(r.next_below(lim.max_cost + 1));
    g.edges.push_back({c.tail, c.head, Cost{units * 1'000'000}, id++});
  }
  validate_physical_graph(g);
  return g;
}

/// Redraws until the network admits robustness k; nullopt if the budget runs out.
inline std::optional<PhysicalGraph> random_feasible_instance(rng& r, int k,
                                                             const InstanceLimits& lim,
                                                             int attempts = 400) {
  for (int i = 0; i < attempts; ++i) {
    PhysicalGraph g = random_instance(r, lim);
    auto mk = max_robustness(g);
    if (mk && *mk >= k) return g;
  }
  return std::nullopt;
}

/// Node layout matches simple_from_dynamic: sensors, outputs, fusion last.
inline WeightedDigraph dynamic_as_digraph(const DynamicGraph& gd) {
  WeightedDigraph w;
  int nx = gd.n_sensors;
  int ny = static_cast<int>(gd.outputs.size());
  w.n_nodes = nx + ny + 1;
  for (const DynEdge& e : gd.edges) {
    auto node = [&](NodeId id) {
      if (id.role == Role::Sensor) return id.index;
      if (id.role == Role::Output) return nx + id.index;
      return nx + ny;
    };
    w.arcs.push_back({node(e.tail), node(e.head), e.cost, e.edge_id});
  }
  return w;
}

inline StructuralPair random_pair(rng& r, int n, int m, double a_density) {
  std::vector<std::vector<std::uint8_t>> a(n, std::vector<std::uint8_t>(n, 0));
  std::vector<std::vector<std::uint8_t>> c(m, std::vector<std::uint8_t>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = r.next_unit() < a_density ? 1 : 0;
  for (int row = 0; row < m; ++row)
    if (r.next_unit() >= 0.25) c[row][r.next_below(n)] = 1;
  return make_structural_pair(std::move(a), std::move(c));
}

inline SimpleDigraph random_simple_digraph(rng& r, int min_nodes, int max_nodes,
                                           double arc_prob, double dup_prob) {
  SimpleDigraph g;
  g.n_nodes = min_nodes + static_cast<int>(r.next_below(max_nodes - min_nodes + 1));
  for (int i = 0; i < g.n_nodes; ++i)
    for (int j = 0; j < g.n_nodes; ++j) {
      if (i == j) continue;
      if (r.next_unit() < arc_prob) {
        g.arcs.emplace_back(i, j);
        if (r.next_unit() < dup_prob) g.arcs.emplace_back(i, j);
      }
    }
  return g;
}

inline WeightedDigraph random_weighted_digraph(rng& r, int min_nodes, int max_nodes,
                                               double arc_prob, int max_cost) {
  WeightedDigraph g;
  g.n_nodes = min_nodes + static_cast<int>(r.next_below(max_nodes - min_nodes + 1));
  int id = 0;
  for (int i = 0; i < g.n_nodes; ++i)
    for (int j = 0; j < g.n_nodes; ++j) {
      if (i == j) continue;
      if (r.next_unit() < arc_prob) {
        std::int64_t units = static_cast<std::int64_t>(r.next_below(max_cost + 1));
        g.arcs.push_back({i, j, Cost{units * 1'000'000}, id++});
      }
    }
  return g;
}

}  // namespace obsnet::testhelp
