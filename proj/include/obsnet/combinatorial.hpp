#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "obsnet/common.hpp"
#include "obsnet/graph_model.hpp"

namespace obsnet {

struct WeightedDigraph {
  struct Arc {
    int tail = -1;
    int head = -1;
    Cost cost;
    int edge_id = -1;
  };
  int n_nodes = 0;
  std::vector<Arc> arcs;
};

struct ArborescenceResult {
  std::vector<int> edges;  // selected edge_ids, ascending
  Cost total_cost;
  int root = -1;
};

/// Minimum-cost spanning in-arborescence: every non-root node keeps exactly
/// one outgoing arc, forming its unique path to the root. Cost ties prefer
/// the lowest edge_id at each selection step.
ArborescenceResult min_spanning_arborescence(const WeightedDigraph& g, int root);

struct Matroid {
  virtual ~Matroid() = default;
  virtual const std::vector<int>& ground_set() const = 0;
  virtual bool is_independent(const std::vector<int>& subset) const = 0;
};

/// Elements are independent while each class stays within its capacity;
/// elements outside every class are unconstrained.
class PartitionMatroid final : public Matroid {
 public:
  PartitionMatroid(std::vector<int> ground, std::vector<std::pair<std::vector<int>, int>> classes);
  const std::vector<int>& ground_set() const override { return ground_; }
  bool is_independent(const std::vector<int>& subset) const override;

 private:
  std::vector<int> ground_;
  std::vector<std::pair<std::vector<int>, int>> classes_;
};

/// Arc-set matroid whose independent sets avoid wasted connectivity toward
/// the fusion node: for every nonempty sensor set S, the number of kept
/// sensor-to-sensor arcs leaving S's members, discounted by the distinct
/// heads hit outside S, stays below c|S| - c. Output-bound arcs are never
/// constrained. Together with per-sensor out-degree caps c, the maximum
/// common independent sets are exactly the minimal arc sets giving every
/// sensor c internally node-disjoint paths to the fusion node.
class RootedConnectivityMatroid final : public Matroid {
 public:
  RootedConnectivityMatroid(const DynamicGraph& gd, int connectivity);
  const std::vector<int>& ground_set() const override { return ground_; }
  bool is_independent(const std::vector<int>& subset) const override;
  int connectivity() const { return c_; }

 private:
  std::vector<int> ground_;
  int c_ = 1;
  int n_sensors_ = 0;
  // per ground position: tail sensor, head sensor (-1 when the head is an
  // output node)
  std::vector<int> tail_, head_;
  std::vector<int> pos_of_edge_;
};

/// Maximum-cardinality common independent set; among those, maximum total
/// benefit (per-cardinality optimality via shortest augmenting paths in the
/// exchange graph). Ties broken toward lower edge_ids. Missing benefit
/// entries count as zero.
std::vector<int> weighted_matroid_intersection(const Matroid& m1, const Matroid& m2,
                                               const std::map<int, Cost>& benefits);

/// Minimum-cost arc subset of gd whose union with the used outputs'
/// output->fusion arcs gives every sensor `connectivity` internally
/// node-disjoint paths to the fusion node. Returned edge_ids include those
/// output->fusion arcs. Errors when some sensor lacks the required
/// connectivity in gd itself.
std::vector<int> min_rooted_connected_subgraph(const DynamicGraph& gd, int connectivity);

struct BruteForceResult {
  Cost cost;
  std::vector<int> edges;  // physical edge_ids, ascending
};

/// Exhaustive reference optimizer over subsets of the physical
/// sensor-sensor and sensor-backbone edges; nullopt when no subset survives
/// k arbitrary sensor deletions. Enumeration limited to 16 candidate edges.
std::optional<BruteForceResult> brute_force_min_structure(const PhysicalGraph& g, int k);

}  // namespace obsnet
