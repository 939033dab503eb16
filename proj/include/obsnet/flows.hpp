#pragma once

#include <optional>
#include <vector>

#include "obsnet/graph_model.hpp"

namespace obsnet {

/// Sentinel for sink-aggregation arcs; large enough that sums stay clear of
/// overflow for documented graph sizes.
inline constexpr std::int64_t flow_infinity = std::int64_t(1) << 60;

struct FlowArc {
  int tail = 0;
  int head = 0;
  std::int64_t capacity = 0;
};

struct FlowNetwork {
  int n_nodes = 0;
  std::vector<FlowArc> arcs;
  int source = 0;
  std::vector<int> sinks;
};

/// Breadth-first augmenting paths (arcs scanned in insertion order), so the
/// value and the residual structure are deterministic.
std::int64_t max_flow(const FlowNetwork& net);

/// Plain directed multigraph used by connectivity queries.
struct SimpleDigraph {
  int n_nodes = 0;
  std::vector<std::pair<int, int>> arcs;
};

SimpleDigraph simple_from_dynamic(const DynamicGraph& g);

/// Maximum number of internally node-disjoint directed paths from sensor x
/// to the backbone set: non-source sensors get node capacity 1, sensor and
/// sensor-to-backbone links capacity 1, backbone nodes are uncapacitated and
/// drain into a synthetic super-sink.
int sensor_disjoint_paths(const PhysicalGraph& g, NodeId x);

/// Largest k such that every sensor keeps k+1 disjoint routes into the
/// backbone; nullopt when some sensor has none or a backbone node that
/// terminates sensor links cannot reach the fusion centre.
std::optional<int> max_robustness(const PhysicalGraph& g);

/// Menger value: internally node-disjoint u->v paths via unit node splitting.
int local_node_connectivity(const SimpleDigraph& g, int u, int v);

}  // namespace obsnet
