#include "obsnet/graph_model.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"

namespace obsnet {

using ordered_json = nlohmann::ordered_json;

const std::string& PhysicalGraph::node_name(NodeId id) const {
  switch (id.role) {
    case Role::Sensor:
      return sensor_names.at(id.index);
    case Role::Backbone:
      return backbone_names.at(id.index);
    case Role::Fusion:
      return fusion_name;
    default:
      fail(errc::internal, "physical graph has no output nodes");
  }
}

EdgeKind PhysicalGraph::edge_kind(const Edge& e) const {
  if (e.tail.role == Role::Sensor && e.head.role == Role::Sensor) return EdgeKind::SensorSensor;
  if (e.tail.role == Role::Sensor && e.head.role == Role::Backbone) return EdgeKind::SensorBackbone;
  if (e.tail.role == Role::Backbone && e.head.role == Role::Backbone) return EdgeKind::BackboneBackbone;
  if (e.tail.role == Role::Backbone && e.head.role == Role::Fusion) return EdgeKind::BackboneFusion;
  fail(errc::validation, "disallowed edge role pair");
}

void validate_physical_graph(const PhysicalGraph& g) {
  if (g.sensor_names.empty()) fail(errc::validation, "zero sensors");
  if (g.fusion_name.empty()) fail(errc::validation, "missing fusion node");
  if (g.edges.size() > 10'000) fail(errc::validation, "edge count exceeds documented limit");

  std::map<std::string, int> seen;
  auto check_name = [&](const std::string& name) {
    if (name.empty()) fail(errc::io_format, "empty node name");
    if (++seen[name] > 1) fail(errc::io_format, "duplicate node name: " + name);
  };
  for (const auto& n : g.sensor_names) check_name(n);
  for (const auto& n : g.backbone_names) check_name(n);
  check_name(g.fusion_name);

  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const Edge& e = g.edges[i];
    if (e.edge_id != static_cast<int>(i)) fail(errc::internal, "edge ids must be dense");
    if (e.cost.micro < 0) fail(errc::io_format, "negative cost");
    if (e.cost.micro > 1'000'000'000'000LL) fail(errc::validation, "cost exceeds documented limit");
    if (e.tail == e.head) fail(errc::validation, "explicit self-loops are not stored");
    g.edge_kind(e);  // throws on a disallowed role pair
    auto in_range = [&](NodeId id) {
      switch (id.role) {
        case Role::Sensor:
          return id.index >= 0 && id.index < g.n_sensors();
        case Role::Backbone:
          return id.index >= 0 && id.index < g.n_backbone();
        case Role::Fusion:
          return id.index == 0;
        default:
          return false;
      }
    };
    if (!in_range(e.tail) || !in_range(e.head)) fail(errc::internal, "edge endpoint out of range");
  }
}

namespace {

Cost parse_cost_field(const ordered_json& v) {
  if (v.is_string()) return cost_from_string(v.get<std::string>());
  if (v.is_number_integer()) {
    auto units = v.get<std::int64_t>();
    if (units < 0) fail(errc::io_format, "negative cost");
    if (units > 1'000'000) fail(errc::validation, "cost exceeds documented limit");
    return Cost{units * 1'000'000};
  }
  if (v.is_number_float()) {
    double units = v.get<double>();
    if (units < 0) fail(errc::io_format, "negative cost");
    return cost_from_double(units);
  }
  fail(errc::io_format, "malformed cost value");
}

double cost_to_double(Cost c) { return static_cast<double>(c.micro) / 1e6; }

std::string dot_label(Cost c) {
  std::string s = cost_to_string(c);
  if (s.find('.') == std::string::npos) s += ".0";
  return s;
}

const char* role_color(Role r) {
  switch (r) {
    case Role::Sensor:
      return "black";
    case Role::Backbone:
      return "green";
    case Role::Fusion:
      return "red";
    default:
      return "blue";
  }
}

const char* role_word(Role r) {
  switch (r) {
    case Role::Sensor:
      return "sensor";
    case Role::Backbone:
      return "backbone";
    case Role::Fusion:
      return "fusion";
    default:
      return "output";
  }
}

}  // namespace

PhysicalGraph parse_physical_graph(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    fail(errc::io_format, std::string("malformed document: ") + e.what());
  }
  if (!doc.is_object()) fail(errc::io_format, "malformed document: top level must be an object");
  for (const char* key : {"sensors", "backbone", "fusion", "edges"})
    if (!doc.contains(key)) fail(errc::io_format, std::string("missing key: ") + key);
  if (!doc["sensors"].is_array() || !doc["backbone"].is_array() || !doc["edges"].is_array() ||
      !doc["fusion"].is_string())
    fail(errc::io_format, "malformed document: bad field types");

  PhysicalGraph g;
  for (const auto& s : doc["sensors"]) {
    if (!s.is_string()) fail(errc::io_format, "sensor names must be strings");
    g.sensor_names.push_back(s.get<std::string>());
  }
  for (const auto& s : doc["backbone"]) {
    if (!s.is_string()) fail(errc::io_format, "backbone names must be strings");
    g.backbone_names.push_back(s.get<std::string>());
  }
  g.fusion_name = doc["fusion"].get<std::string>();

  std::map<std::string, NodeId> by_name;
  for (int i = 0; i < g.n_sensors(); ++i) by_name[g.sensor_names[i]] = NodeId{Role::Sensor, i};
  for (int i = 0; i < g.n_backbone(); ++i) by_name[g.backbone_names[i]] = NodeId{Role::Backbone, i};
  by_name[g.fusion_name] = NodeId{Role::Fusion, 0};

  int next_id = 0;
  for (const auto& je : doc["edges"]) {
    if (!je.is_object() || !je.contains("from") || !je.contains("to") || !je.contains("cost"))
      fail(errc::io_format, "edge entries need from/to/cost");
    auto from = je["from"].get<std::string>();
    auto to = je["to"].get<std::string>();
    auto it_f = by_name.find(from);
    auto it_t = by_name.find(to);
    if (it_f == by_name.end()) fail(errc::io_format, "unknown node: " + from);
    if (it_t == by_name.end()) fail(errc::io_format, "unknown node: " + to);
    Edge e{it_f->second, it_t->second, parse_cost_field(je["cost"]), next_id++};
    g.edges.push_back(e);
  }
  if (doc.contains("meta")) {
    if (!doc["meta"].is_object()) fail(errc::io_format, "meta must be an object");
    g.meta_json = doc["meta"].dump();
  }
  validate_physical_graph(g);
  return g;
}

std::string serialize(const PhysicalGraph& g, TextFormat format) {
  if (format == TextFormat::Json) {
    ordered_json doc;
    doc["sensors"] = g.sensor_names;
    doc["backbone"] = g.backbone_names;
    doc["fusion"] = g.fusion_name;
    doc["edges"] = ordered_json::array();
    for (const Edge& e : g.edges) {
      ordered_json je;
      je["from"] = g.node_name(e.tail);
      je["to"] = g.node_name(e.head);
      je["cost"] = cost_to_double(e.cost);
      doc["edges"].push_back(je);
    }
    doc["meta"] = ordered_json::parse(g.meta_json);
    return doc.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "digraph physical {\n";
  auto emit_node = [&](const std::string& name, Role r) {
    out << "  \"" << name << "\" [role=" << role_word(r) << ", color=" << role_color(r) << "];\n";
  };
  for (const auto& n : g.sensor_names) emit_node(n, Role::Sensor);
  for (const auto& n : g.backbone_names) emit_node(n, Role::Backbone);
  emit_node(g.fusion_name, Role::Fusion);
  for (const Edge& e : g.edges)
    out << "  \"" << g.node_name(e.tail) << "\" -> \"" << g.node_name(e.head) << "\" [label="
        << dot_label(e.cost) << "];\n";
  out << "}\n";
  return out.str();
}

std::string DynamicGraph::node_name(NodeId id) const {
  switch (id.role) {
    case Role::Sensor:
      return sensor_names.at(id.index);
    case Role::Fusion:
      return fusion_name;
    case Role::Output: {
      const DynOutput& o = outputs.at(id.index);
      return "y" + std::to_string(id.index + 1) + "_" + sensor_names.at(o.source_sensor.index);
    }
    default:
      fail(errc::internal, "dynamic graph has no backbone nodes");
  }
}

std::string serialize(const DynamicGraph& g, TextFormat format) {
  if (format == TextFormat::Json) {
    ordered_json doc;
    doc["variant"] = g.variant == DynVariant::Base ? "base" : "shifted";
    doc["sensors"] = g.sensor_names;
    doc["fusion"] = g.fusion_name;
    doc["outputs"] = ordered_json::array();
    for (const DynOutput& o : g.outputs) {
      ordered_json jo;
      jo["output"] = g.node_name(o.output);
      jo["sensor"] = g.sensor_names.at(o.source_sensor.index);
      jo["physical_edge_id"] = o.physical_edge_id;
      doc["outputs"].push_back(jo);
    }
    doc["edges"] = ordered_json::array();
    for (const DynEdge& e : g.edges) {
      ordered_json je;
      je["from"] = g.node_name(e.tail);
      je["to"] = g.node_name(e.head);
      je["cost"] = cost_to_double(e.cost);
      je["physical_edge_id"] = e.physical_edge_id;
      doc["edges"].push_back(je);
    }
    return doc.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "digraph dynamic {\n";
  for (const auto& n : g.sensor_names)
    out << "  \"" << n << "\" [role=sensor, color=black];\n";
  for (std::size_t j = 0; j < g.outputs.size(); ++j) {
    NodeId id{Role::Output, static_cast<int>(j)};
    out << "  \"" << g.node_name(id) << "\" [role=output, color=blue];\n";
  }
  out << "  \"" << g.fusion_name << "\" [role=fusion, color=red];\n";
  for (const DynEdge& e : g.edges)
    out << "  \"" << g.node_name(e.tail) << "\" -> \"" << g.node_name(e.head) << "\" [label="
        << dot_label(e.cost) << "];\n";
  out << "}\n";
  return out.str();
}

PhysicalGraph random_geometric(int n_sensors, int n_backbone, double radius,
                               CostModel cost_model, std::uint64_t seed) {
  if (n_sensors < 1) fail(errc::validation, "random_geometric: n_sensors must be >= 1");
  if (n_backbone < 1) fail(errc::validation, "random_geometric: n_backbone must be >= 1");
  if (!(radius > 0.0) || radius > std::sqrt(2.0) + 1e-12)
    fail(errc::validation, "random_geometric: radius must lie in (0, sqrt(2)]");
  (void)cost_model;  // single model for now

  // Draw order is part of the determinism contract: sensor coordinates in
  // index order, then backbone, then fusion; two doubles per node.
  rng r(seed);
  struct Pt {
    double x, y;
  };
  std::vector<Pt> xs(n_sensors), qs(n_backbone);
  for (auto& p : xs) {
    p.x = r.next_unit();
    p.y = r.next_unit();
  }
  for (auto& p : qs) {
    p.x = r.next_unit();
    p.y = r.next_unit();
  }
  Pt z{r.next_unit(), r.next_unit()};

  PhysicalGraph g;
  for (int i = 0; i < n_sensors; ++i) g.sensor_names.push_back("x" + std::to_string(i + 1));
  for (int i = 0; i < n_backbone; ++i) g.backbone_names.push_back("q" + std::to_string(i + 1));
  g.fusion_name = "z";

  auto dist2 = [](Pt a, Pt b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
  };
  double r2 = radius * radius;
  int next_id = 0;
  auto add = [&](NodeId t, NodeId h, double d2) {
    g.edges.push_back(Edge{t, h, cost_from_double(d2), next_id++});
  };
  // Edge blocks in fixed order: sensor-sensor, sensor-backbone,
  // backbone-backbone, backbone-fusion.
  for (int i = 0; i < n_sensors; ++i)
    for (int j = 0; j < n_sensors; ++j) {
      if (i == j) continue;
      double d2 = dist2(xs[i], xs[j]);
      if (d2 <= r2) add(NodeId{Role::Sensor, i}, NodeId{Role::Sensor, j}, d2);
    }
  for (int i = 0; i < n_sensors; ++i)
    for (int q = 0; q < n_backbone; ++q) {
      double d2 = dist2(xs[i], qs[q]);
      if (d2 <= r2) add(NodeId{Role::Sensor, i}, NodeId{Role::Backbone, q}, d2);
    }
  for (int a = 0; a < n_backbone; ++a)
    for (int b = 0; b < n_backbone; ++b) {
      if (a == b) continue;
      double d2 = dist2(qs[a], qs[b]);
      if (d2 <= r2) add(NodeId{Role::Backbone, a}, NodeId{Role::Backbone, b}, d2);
    }
  for (int a = 0; a < n_backbone; ++a) {
    double d2 = dist2(qs[a], z);
    if (d2 <= r2) add(NodeId{Role::Backbone, a}, NodeId{Role::Fusion, 0}, d2);
  }

  ordered_json meta;
  meta["generator"] = "random_geometric";
  meta["seed"] = seed;
  meta["radius"] = radius;
  meta["cost_model"] = "distance_squared";
  meta["fusion_placement"] = "uniform_unit_square";
  ordered_json coords;
  for (int i = 0; i < n_sensors; ++i) coords[g.sensor_names[i]] = {xs[i].x, xs[i].y};
  for (int i = 0; i < n_backbone; ++i) coords[g.backbone_names[i]] = {qs[i].x, qs[i].y};
  coords[g.fusion_name] = {z.x, z.y};
  meta["coordinates"] = coords;
  g.meta_json = meta.dump();

  validate_physical_graph(g);
  return g;
}

}  // namespace obsnet
