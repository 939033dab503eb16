#pragma once

#include <map>
#include <string>
#include <vector>

#include "obsnet/graph_model.hpp"
#include "obsnet/structural.hpp"

namespace obsnet {

/// Cheapest directed routes from backbone nodes to the fusion centre.
/// Nodes with no route are absent from both maps.
struct BackboneRoutes {
  std::map<int, Cost> dist;        // backbone index -> total route cost
  std::map<int, int> parent_edge;  // backbone index -> first edge toward z
};

BackboneRoutes backbone_shortest_paths(const PhysicalGraph& g);

/// Edge ids along the recorded route from backbone node q to the fusion
/// centre, in travel order.
std::vector<int> backbone_route_edges(const PhysicalGraph& g, const BackboneRoutes& routes,
                                      int q);

/// One output node per sensor->backbone edge; errors when such an edge
/// targets a backbone node that cannot reach the fusion centre.
DynamicGraph build_dynamic_graph(const PhysicalGraph& g, const BackboneRoutes& routes);

/// Folds each output's route cost into its incoming edge so that all cost
/// sits on edges leaving sensors; route totals are unchanged.
DynamicGraph shift_weights(const DynamicGraph& base);

struct DesignSolution {
  StructuralPair structure;
  std::vector<std::string> sensor_names;      // column labels, may be empty
  std::vector<int> used_physical_edges;       // sorted set, E_XX + E_XQ + route edges
  std::map<int, Cost> per_output_route_cost;  // used output row -> route cost
  Cost cost_per_output_sum;
  Cost cost_deduplicated;
  int k = 0;
};

/// Whole design run for robustness parameter k: backbone routes, dynamic
/// graph, weight shift, minimum rooted subgraph at connectivity k+1,
/// self-loop augmentation, matrix extraction, and cost accounting.
DesignSolution design(const PhysicalGraph& g, int k);

struct EvaluatedCost {
  Cost per_output_sum;
  Cost deduplicated;
  std::vector<int> used_physical_edges;
};

/// Prices an arbitrary structural pair against the graph: sensor links at
/// face value (parallel links resolved to the cheapest, then lowest id),
/// each used output at its full sensor->backbone->fusion route cost.
EvaluatedCost evaluate_cost(const PhysicalGraph& g, const StructuralPair& s);

std::string design_to_json(const PhysicalGraph& g, const DesignSolution& sol);
std::string design_to_dot(const PhysicalGraph& g, const DesignSolution& sol);

/// Parses a design document back into a solution; the originating graph is
/// not required (sensor bindings are recovered from the matrices).
DesignSolution design_from_json(const std::string& text);

}  // namespace obsnet
