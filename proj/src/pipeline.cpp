#include "obsnet/pipeline.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>
#include <utility>

#include "obsnet/combinatorial.hpp"
#include "json.hpp"

namespace obsnet {

using ordered_json = nlohmann::ordered_json;

namespace {

double cost_to_double(Cost c) { return static_cast<double>(c.micro) / 1e6; }

std::vector<int> edge_index_by_id(const PhysicalGraph& g) {
  int max_id = -1;
  for (const Edge& e : g.edges) max_id = std::max(max_id, e.edge_id);
  std::vector<int> pos(max_id + 1, -1);
  for (std::size_t i = 0; i < g.edges.size(); ++i) pos[g.edges[i].edge_id] = static_cast<int>(i);
  return pos;
}

}  // namespace

BackboneRoutes backbone_shortest_paths(const PhysicalGraph& g) {
  int nq = g.n_backbone();
  int fusion = nq;
  struct RevArc {
    int from_toward;  // node the edge leaves when traveling toward z
    std::int64_t cost;
    int edge_id;
  };
  std::vector<std::vector<RevArc>> rev(nq + 1);
  for (const Edge& e : g.edges) {
    EdgeKind kind = g.edge_kind(e);
    if (kind == EdgeKind::BackboneBackbone)
      rev[e.head.index].push_back({e.tail.index, e.cost.micro, e.edge_id});
    else if (kind == EdgeKind::BackboneFusion)
      rev[fusion].push_back({e.tail.index, e.cost.micro, e.edge_id});
  }

  constexpr std::int64_t unreached = std::int64_t(1) << 62;
  std::vector<std::int64_t> dist(nq + 1, unreached);
  std::vector<int> parent(nq + 1, -1);
  using Item = std::pair<std::int64_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[fusion] = 0;
  pq.push({0, fusion});
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (const RevArc& a : rev[v]) {
      std::int64_t nd = d + a.cost;
      if (nd < dist[a.from_toward]) {
        dist[a.from_toward] = nd;
        parent[a.from_toward] = a.edge_id;
        pq.push({nd, a.from_toward});
      }
    }
  }

  BackboneRoutes routes;
  for (int q = 0; q < nq; ++q)
    if (dist[q] < unreached) {
      routes.dist[q] = Cost{dist[q]};
      routes.parent_edge[q] = parent[q];
    }
  return routes;
}

std::vector<int> backbone_route_edges(const PhysicalGraph& g, const BackboneRoutes& routes,
                                      int q) {
  std::vector<int> pos = edge_index_by_id(g);
  std::vector<int> out;
  int cur = q;
  for (;;) {
    auto it = routes.parent_edge.find(cur);
    if (it == routes.parent_edge.end())
      fail(errc::infeasible,
           "backbone node " + g.backbone_names.at(q) + " cannot reach the fusion centre");
    const Edge& e = g.edges.at(pos.at(it->second));
    out.push_back(e.edge_id);
    if (e.head.role == Role::Fusion) return out;
    cur = e.head.index;
  }
}

DynamicGraph build_dynamic_graph(const PhysicalGraph& g, const BackboneRoutes& routes) {
  DynamicGraph gd;
  gd.n_sensors = g.n_sensors();
  gd.sensor_names = g.sensor_names;
  gd.fusion_name = g.fusion_name;
  gd.variant = DynVariant::Base;

  int next = 0;
  for (const Edge& e : g.edges)
    if (g.edge_kind(e) == EdgeKind::SensorSensor)
      gd.edges.push_back(DynEdge{e.tail, e.head, e.cost, next++, e.edge_id});
  for (const Edge& e : g.edges) {
    if (g.edge_kind(e) != EdgeKind::SensorBackbone) continue;
    int q = e.head.index;
    auto it = routes.dist.find(q);
    if (it == routes.dist.end())
      fail(errc::infeasible, "backbone node " + g.backbone_names.at(q) +
                                 " carries a sensor link but cannot reach the fusion centre");
    int j = static_cast<int>(gd.outputs.size());
    NodeId y{Role::Output, j};
    gd.outputs.push_back(DynOutput{y, e.tail, e.head, e.edge_id});
    gd.edges.push_back(DynEdge{e.tail, y, e.cost, next++, e.edge_id});
    gd.edges.push_back(DynEdge{y, NodeId{Role::Fusion, 0}, it->second, next++, -1});
  }
  return gd;
}

DynamicGraph shift_weights(const DynamicGraph& base) {
  if (base.variant != DynVariant::Base)
    fail(errc::validation, "weight shift expects the base variant");
  DynamicGraph out = base;
  int n_outputs = static_cast<int>(out.outputs.size());
  std::vector<int> into(n_outputs, -1), leaving(n_outputs, -1);
  for (std::size_t i = 0; i < out.edges.size(); ++i) {
    const DynEdge& e = out.edges[i];
    if (e.head.role == Role::Output) into[e.head.index] = static_cast<int>(i);
    if (e.tail.role == Role::Output) leaving[e.tail.index] = static_cast<int>(i);
  }
  for (int j = 0; j < n_outputs; ++j) {
    if (into[j] < 0 || leaving[j] < 0) fail(errc::internal, "output node missing an edge");
    out.edges[into[j]].cost += out.edges[leaving[j]].cost;
    out.edges[leaving[j]].cost = Cost{0};
  }
  out.variant = DynVariant::Shifted;
  return out;
}

DesignSolution design(const PhysicalGraph& g, int k) {
  if (k < 0) fail(errc::validation, "robustness parameter must be >= 0");
  validate_physical_graph(g);

  BackboneRoutes routes = backbone_shortest_paths(g);
  DynamicGraph gd = build_dynamic_graph(g, routes);
  DynamicGraph gds = shift_weights(gd);
  std::vector<int> chosen = min_rooted_connected_subgraph(gds, k + 1);

  std::vector<char> picked(gds.edges.size(), 0);
  Cost shifted_total{0}, base_total{0};
  for (int id : chosen) {
    picked.at(id) = 1;
    shifted_total += gds.edges.at(id).cost;
    base_total += gd.edges.at(id).cost;
  }
  if (shifted_total != base_total)
    fail(errc::internal, "weight shift changed the selected subgraph cost");

  int n = g.n_sensors();
  int m = static_cast<int>(gd.outputs.size());
  StructuralPair s;
  s.n_states = n;
  s.a_pattern.assign(n, std::vector<std::uint8_t>(n, 0));
  for (int i = 0; i < n; ++i) s.a_pattern[i][i] = 1;  // zero-cost self-loops
  s.c_pattern.assign(m, std::vector<std::uint8_t>(n, 0));
  s.output_index.resize(m);
  for (int j = 0; j < m; ++j) {
    const DynOutput& o = gd.outputs[j];
    s.output_index[j] = {o.source_sensor.index, o.via_backbone.index, o.physical_edge_id};
  }

  DesignSolution sol;
  std::set<int> used;
  Cost per_output_sum{0};
  for (const DynEdge& e : gd.edges) {
    if (!picked[e.edge_id]) continue;
    if (e.tail.role == Role::Sensor && e.head.role == Role::Sensor) {
      s.a_pattern[e.head.index][e.tail.index] = 1;
      used.insert(e.physical_edge_id);
      per_output_sum += e.cost;
    } else if (e.tail.role == Role::Sensor && e.head.role == Role::Output) {
      int j = e.head.index;
      s.c_pattern[j][e.tail.index] = 1;
      used.insert(e.physical_edge_id);
      int q = gd.outputs[j].via_backbone.index;
      for (int id : backbone_route_edges(g, routes, q)) used.insert(id);
      sol.per_output_route_cost[j] = routes.dist.at(q);
      per_output_sum += e.cost + routes.dist.at(q);
    }
  }
  if (per_output_sum != shifted_total)
    fail(errc::internal, "cost accounting diverged from the optimizer total");
  validate_structural_pair(s);

  std::vector<int> pos = edge_index_by_id(g);
  Cost dedup{0};
  for (int id : used) dedup += g.edges.at(pos.at(id)).cost;

  sol.structure = std::move(s);
  sol.sensor_names = g.sensor_names;
  sol.used_physical_edges.assign(used.begin(), used.end());
  sol.cost_per_output_sum = per_output_sum;
  sol.cost_deduplicated = dedup;
  sol.k = k;
  return sol;
}

EvaluatedCost evaluate_cost(const PhysicalGraph& g, const StructuralPair& s) {
  validate_structural_pair(s);
  if (s.n_states != g.n_sensors())
    fail(errc::validation, "structural pair size disagrees with the graph");
  BackboneRoutes routes = backbone_shortest_paths(g);
  std::vector<int> pos = edge_index_by_id(g);

  std::set<int> used;
  Cost per_output_sum{0};

  for (int i = 0; i < s.n_states; ++i)
    for (int j = 0; j < s.n_states; ++j) {
      if (i == j || !s.a_pattern[i][j]) continue;
      const Edge* best = nullptr;
      for (const Edge& e : g.edges)
        if (g.edge_kind(e) == EdgeKind::SensorSensor && e.tail.index == j &&
            e.head.index == i)
          if (!best || e.cost < best->cost ||
              (e.cost == best->cost && e.edge_id < best->edge_id))
            best = &e;
      if (!best)
        fail(errc::infeasible, "structure uses missing sensor link " + g.sensor_names[j] +
                                   " -> " + g.sensor_names[i]);
      used.insert(best->edge_id);
      per_output_sum += best->cost;
    }

  std::set<int> claimed;
  for (int r = 0; r < s.n_outputs(); ++r) {
    int col = -1;
    for (int j = 0; j < s.n_states; ++j)
      if (s.c_pattern[r][j]) col = j;
    if (col < 0) continue;  // unused output row
    const Edge* link = nullptr;
    int bound = s.output_index[r].physical_edge_id;
    if (bound >= 0) {
      if (bound >= static_cast<int>(pos.size()) || pos[bound] < 0)
        fail(errc::validation, "output row references an unknown edge");
      link = &g.edges[pos[bound]];
      if (g.edge_kind(*link) != EdgeKind::SensorBackbone || link->tail.index != col)
        fail(errc::validation, "output row binding disagrees with its matrix entry");
      if (!routes.dist.count(link->head.index))
        fail(errc::infeasible, "backbone node " + g.backbone_names[link->head.index] +
                                   " cannot reach the fusion centre");
    } else {
      // raw matrices: claim the cheapest unclaimed routed link of this sensor
      Cost best_total{0};
      for (const Edge& e : g.edges) {
        if (g.edge_kind(e) != EdgeKind::SensorBackbone || e.tail.index != col) continue;
        if (claimed.count(e.edge_id)) continue;
        auto it = routes.dist.find(e.head.index);
        if (it == routes.dist.end()) continue;
        Cost total = e.cost + it->second;
        if (!link || total < best_total) {
          link = &e;
          best_total = total;
        }
      }
      if (!link)
        fail(errc::infeasible,
             "no routed backbone link available for sensor " + g.sensor_names[col]);
    }
    claimed.insert(link->edge_id);
    used.insert(link->edge_id);
    int q = link->head.index;
    for (int id : backbone_route_edges(g, routes, q)) used.insert(id);
    per_output_sum += link->cost + routes.dist.at(q);
  }

  EvaluatedCost out;
  Cost dedup{0};
  for (int id : used) dedup += g.edges.at(pos.at(id)).cost;
  out.per_output_sum = per_output_sum;
  out.deduplicated = dedup;
  out.used_physical_edges.assign(used.begin(), used.end());
  return out;
}

std::string design_to_json(const PhysicalGraph& g, const DesignSolution& sol) {
  ordered_json doc;
  doc["k"] = sol.k;
  doc["sensors"] = sol.sensor_names.empty() ? g.sensor_names : sol.sensor_names;
  doc["a_pattern"] = sol.structure.a_pattern;
  doc["c_pattern"] = sol.structure.c_pattern;
  doc["outputs"] = ordered_json::array();
  for (int r = 0; r < sol.structure.n_outputs(); ++r) {
    const auto& ref = sol.structure.output_index[r];
    bool is_used = false;
    for (int j = 0; j < sol.structure.n_states; ++j)
      if (sol.structure.c_pattern[r][j]) is_used = true;
    ordered_json jo;
    jo["row"] = r;
    jo["sensor"] = ref.sensor >= 0 ? g.sensor_names.at(ref.sensor) : "";
    jo["backbone"] = ref.backbone >= 0 ? g.backbone_names.at(ref.backbone) : "";
    jo["used"] = is_used;
    doc["outputs"].push_back(jo);
  }
  doc["cost_per_output_sum"] = cost_to_double(sol.cost_per_output_sum);
  doc["cost_deduplicated"] = cost_to_double(sol.cost_deduplicated);
  doc["used_edges"] = ordered_json::array();
  std::vector<int> pos = edge_index_by_id(g);
  for (int id : sol.used_physical_edges) {
    const Edge& e = g.edges.at(pos.at(id));
    ordered_json je;
    je["id"] = id;
    je["from"] = g.node_name(e.tail);
    je["to"] = g.node_name(e.head);
    je["cost"] = cost_to_double(e.cost);
    doc["used_edges"].push_back(je);
  }
  return doc.dump(2) + "\n";
}

std::string design_to_dot(const PhysicalGraph& g, const DesignSolution& sol) {
  std::vector<int> pos = edge_index_by_id(g);
  std::set<std::string> named;
  std::ostringstream body;
  auto want_node = [&](NodeId id, const char* role, const char* color) {
    std::string name = g.node_name(id);
    if (named.insert(name).second)
      body << "  \"" << name << "\" [role=" << role << ", color=" << color << "];\n";
  };
  std::ostringstream edges;
  for (int id : sol.used_physical_edges) {
    const Edge& e = g.edges.at(pos.at(id));
    const char* tail_role = e.tail.role == Role::Sensor ? "sensor" : "backbone";
    const char* tail_color = e.tail.role == Role::Sensor ? "black" : "green";
    want_node(e.tail, tail_role, tail_color);
    if (e.head.role == Role::Fusion)
      want_node(e.head, "fusion", "red");
    else
      want_node(e.head, e.head.role == Role::Sensor ? "sensor" : "backbone",
                e.head.role == Role::Sensor ? "black" : "green");
    std::string label = cost_to_string(e.cost);
    if (label.find('.') == std::string::npos) label += ".0";
    edges << "  \"" << g.node_name(e.tail) << "\" -> \"" << g.node_name(e.head)
          << "\" [label=" << label << ", style=solid];\n";
  }
  std::ostringstream out;
  out << "digraph design {\n" << body.str() << edges.str() << "}\n";
  return out.str();
}

DesignSolution design_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    fail(errc::io_format, std::string("malformed design document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("k") || !doc.contains("a_pattern") ||
      !doc.contains("c_pattern"))
    fail(errc::io_format, "design document needs k, a_pattern, c_pattern");

  auto read_matrix = [](const ordered_json& jm, const char* what) {
    std::vector<std::vector<std::uint8_t>> rows;
    if (!jm.is_array()) fail(errc::io_format, std::string(what) + " must be a matrix");
    for (const auto& jr : jm) {
      if (!jr.is_array()) fail(errc::io_format, std::string(what) + " must be a matrix");
      std::vector<std::uint8_t> row;
      for (const auto& v : jr) {
        if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
          fail(errc::io_format, std::string(what) + " entries must be 0 or 1");
        row.push_back(static_cast<std::uint8_t>(v.get<int>()));
      }
      rows.push_back(std::move(row));
    }
    return rows;
  };

  DesignSolution sol;
  if (!doc["k"].is_number_integer() || doc["k"].get<int>() < 0)
    fail(errc::io_format, "k must be a non-negative integer");
  sol.k = doc["k"].get<int>();
  try {
    sol.structure = make_structural_pair(read_matrix(doc["a_pattern"], "a_pattern"),
                                         read_matrix(doc["c_pattern"], "c_pattern"));
  } catch (const error& e) {
    fail(errc::io_format, e.what());
  }
  if (doc.contains("sensors") && doc["sensors"].is_array())
    for (const auto& name : doc["sensors"])
      if (name.is_string()) sol.sensor_names.push_back(name.get<std::string>());
  if (doc.contains("cost_per_output_sum"))
    sol.cost_per_output_sum = cost_from_double(doc["cost_per_output_sum"].get<double>());
  if (doc.contains("cost_deduplicated"))
    sol.cost_deduplicated = cost_from_double(doc["cost_deduplicated"].get<double>());
  if (doc.contains("used_edges"))
    for (const auto& je : doc["used_edges"])
      if (je.contains("id")) sol.used_physical_edges.push_back(je["id"].get<int>());
  return sol;
}

}  // namespace obsnet
