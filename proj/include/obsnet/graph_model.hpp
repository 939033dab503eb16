#pragma once

#include <string>
#include <vector>

#include "obsnet/common.hpp"

namespace obsnet {

enum class Role { Sensor, Backbone, Fusion, Output };

struct NodeId {
  Role role = Role::Sensor;
  int index = 0;

  friend bool operator==(const NodeId& a, const NodeId& b) {
    return a.role == b.role && a.index == b.index;
  }
  friend bool operator!=(const NodeId& a, const NodeId& b) { return !(a == b); }
};

struct Edge {
  NodeId tail;
  NodeId head;
  Cost cost;
  int edge_id = 0;
};

enum class EdgeKind { SensorSensor, SensorBackbone, BackboneBackbone, BackboneFusion };

/// The physical network G_P: sensors X, backbone Q, one fusion centre z.
/// Sensor self-loops are a model rule (implicitly present at zero cost) and
/// never stored. Parallel edges are allowed and keep distinct edge_ids.
struct PhysicalGraph {
  std::vector<std::string> sensor_names;
  std::vector<std::string> backbone_names;
  std::string fusion_name = "z";
  std::vector<Edge> edges;
  std::string meta_json = "{}";  // opaque document metadata, round-tripped

  int n_sensors() const { return static_cast<int>(sensor_names.size()); }
  int n_backbone() const { return static_cast<int>(backbone_names.size()); }
  const std::string& node_name(NodeId id) const;
  EdgeKind edge_kind(const Edge& e) const;
};

/// Validates role admissibility, id density, and documented size limits.
/// Every constructor path (parse, generator, tests) funnels through this.
void validate_physical_graph(const PhysicalGraph& g);

struct DynOutput {
  NodeId output;                // role Output
  NodeId source_sensor;         // the x of y_(x,q)
  NodeId via_backbone;          // the q of y_(x,q)
  int physical_edge_id = 0;     // originating sensor->backbone edge
};

struct DynEdge {
  NodeId tail;
  NodeId head;
  Cost cost;
  int edge_id = 0;
  int physical_edge_id = -1;    // -1 for output->fusion edges
};

enum class DynVariant { Base, Shifted };

/// The dynamic-system cost graph G_D (Base) or G_D' (Shifted): sensors keep
/// their identity, every sensor->backbone edge becomes an output node with
/// one incoming and one outgoing edge, and the backbone collapses into
/// per-output routes to the fusion centre.
struct DynamicGraph {
  int n_sensors = 0;
  std::vector<std::string> sensor_names;  // copied from the physical graph
  std::string fusion_name = "z";
  std::vector<DynOutput> outputs;
  std::vector<DynEdge> edges;
  DynVariant variant = DynVariant::Base;

  std::string node_name(NodeId id) const;
};

enum class CostModel { DistanceSquared };
enum class TextFormat { Json, Dot };

PhysicalGraph parse_physical_graph(const std::string& text);

std::string serialize(const PhysicalGraph& g, TextFormat format);
std::string serialize(const DynamicGraph& g, TextFormat format);

/// Uniform placements on the unit square; a directed edge for every
/// role-admissible pair within `radius` (inclusive), cost = squared
/// Euclidean distance. Identical seeds reproduce identical graphs
/// bit-for-bit; coordinates and parameters are recorded in meta.
PhysicalGraph random_geometric(int n_sensors, int n_backbone, double radius,
                               CostModel cost_model, std::uint64_t seed);

}  // namespace obsnet
