#include "obsnet/flows.hpp"

#include <algorithm>
#include <queue>

namespace obsnet {

namespace {

// Residual graph with paired arcs; BFS scans adjacency in insertion order.
struct Residual {
  struct Arc {
    int head;
    std::int64_t cap;
    int rev;  // index of the reverse arc in adj[head]
  };
  std::vector<std::vector<Arc>> adj;

  explicit Residual(int n) : adj(n) {}

  void add(int tail, int head, std::int64_t cap) {
    adj[tail].push_back({head, cap, static_cast<int>(adj[head].size())});
    adj[head].push_back({tail, 0, static_cast<int>(adj[tail].size()) - 1});
  }

  std::int64_t augment_once(int s, int t) {
    std::vector<std::pair<int, int>> pred(adj.size(), {-1, -1});
    std::queue<int> bfs;
    bfs.push(s);
    pred[s] = {s, 0};
    while (!bfs.empty() && pred[t].first < 0) {
      int u = bfs.front();
      bfs.pop();
      for (std::size_t i = 0; i < adj[u].size(); ++i) {
        const Arc& a = adj[u][i];
        if (a.cap <= 0 || pred[a.head].first >= 0) continue;
        pred[a.head] = {u, static_cast<int>(i)};
        if (a.head == t) break;
        bfs.push(a.head);
      }
    }
    if (pred[t].first < 0) return 0;
    std::int64_t push = flow_infinity * 2;
    for (int v = t; v != s;) {
      auto [u, i] = pred[v];
      push = std::min(push, adj[u][i].cap);
      v = u;
    }
    for (int v = t; v != s;) {
      auto [u, i] = pred[v];
      adj[u][i].cap -= push;
      adj[adj[u][i].head][adj[u][i].rev].cap += push;
      v = u;
    }
    return push;
  }

  std::int64_t run(int s, int t) {
    std::int64_t total = 0;
    for (;;) {
      std::int64_t got = augment_once(s, t);
      if (got == 0) return total;
      total += got;
    }
  }
};

}  // namespace

std::int64_t max_flow(const FlowNetwork& net) {
  for (int s : net.sinks)
    if (s == net.source) fail(errc::validation, "max_flow: source equals a sink");
  if (net.sinks.empty()) return 0;

  int t = net.n_nodes;  // aggregated super-sink
  Residual r(net.n_nodes + 1);
  for (const FlowArc& a : net.arcs) {
    if (a.capacity < 0) fail(errc::validation, "max_flow: negative capacity");
    r.add(a.tail, a.head, a.capacity);
  }
  for (int s : net.sinks) r.add(s, t, flow_infinity);
  return r.run(net.source, t);
}

SimpleDigraph simple_from_dynamic(const DynamicGraph& g) {
  // Node layout: sensors, then outputs, then fusion last.
  SimpleDigraph s;
  s.n_nodes = g.n_sensors + static_cast<int>(g.outputs.size()) + 1;
  auto idx = [&](NodeId id) {
    switch (id.role) {
      case Role::Sensor:
        return id.index;
      case Role::Output:
        return g.n_sensors + id.index;
      default:
        return s.n_nodes - 1;
    }
  };
  for (const DynEdge& e : g.edges) s.arcs.emplace_back(idx(e.tail), idx(e.head));
  return s;
}

int sensor_disjoint_paths(const PhysicalGraph& g, NodeId x) {
  if (x.role != Role::Sensor || x.index < 0 || x.index >= g.n_sensors())
    fail(errc::validation, "sensor_disjoint_paths: x must be a sensor of g");

  // Split every non-source sensor; backbone nodes are uncapacitated.
  int n = g.n_sensors();
  auto s_in = [&](int i) { return 2 * i; };
  auto s_out = [&](int i) { return 2 * i + 1; };
  auto q_node = [&](int q) { return 2 * n + q; };

  FlowNetwork net;
  net.n_nodes = 2 * n + g.n_backbone();
  net.source = s_out(x.index);
  for (int i = 0; i < n; ++i)
    if (i != x.index) net.arcs.push_back({s_in(i), s_out(i), 1});
  for (const Edge& e : g.edges) {
    EdgeKind kind = g.edge_kind(e);
    if (kind == EdgeKind::SensorSensor)
      net.arcs.push_back({s_out(e.tail.index), s_in(e.head.index), 1});
    else if (kind == EdgeKind::SensorBackbone)
      net.arcs.push_back({s_out(e.tail.index), q_node(e.head.index), 1});
  }
  for (int q = 0; q < g.n_backbone(); ++q) net.sinks.push_back(q_node(q));
  if (net.sinks.empty()) return 0;
  return static_cast<int>(max_flow(net));
}

std::optional<int> max_robustness(const PhysicalGraph& g) {
  // Backbone nodes that terminate sensor links must be able to forward to z.
  std::vector<char> used(g.n_backbone(), 0), reaches_z(g.n_backbone(), 0);
  std::vector<std::vector<int>> qq(g.n_backbone());
  for (const Edge& e : g.edges) {
    EdgeKind kind = g.edge_kind(e);
    if (kind == EdgeKind::SensorBackbone) used[e.head.index] = 1;
    if (kind == EdgeKind::BackboneBackbone) qq[e.tail.index].push_back(e.head.index);
    if (kind == EdgeKind::BackboneFusion) reaches_z[e.tail.index] = 1;
  }
  // Reverse closure of "reaches z" over backbone links.
  for (bool grew = true; grew;) {
    grew = false;
    for (int a = 0; a < g.n_backbone(); ++a) {
      if (reaches_z[a]) continue;
      for (int b : qq[a])
        if (reaches_z[b]) {
          reaches_z[a] = 1;
          grew = true;
          break;
        }
    }
  }
  for (int q = 0; q < g.n_backbone(); ++q)
    if (used[q] && !reaches_z[q]) return std::nullopt;

  int least = -1;
  for (int i = 0; i < g.n_sensors(); ++i) {
    int paths = sensor_disjoint_paths(g, NodeId{Role::Sensor, i});
    if (paths == 0) return std::nullopt;
    least = least < 0 ? paths : std::min(least, paths);
  }
  if (least < 0) return std::nullopt;
  return least - 1;
}

int local_node_connectivity(const SimpleDigraph& g, int u, int v) {
  if (u == v) fail(errc::validation, "local_node_connectivity: u and v must differ");
  if (u < 0 || v < 0 || u >= g.n_nodes || v >= g.n_nodes)
    fail(errc::validation, "local_node_connectivity: node out of range");

  auto n_in = [&](int w) { return 2 * w; };
  auto n_out = [&](int w) { return 2 * w + 1; };
  FlowNetwork net;
  net.n_nodes = 2 * g.n_nodes;
  net.source = n_out(u);
  net.sinks = {n_in(v)};
  for (int w = 0; w < g.n_nodes; ++w)
    if (w != u && w != v) net.arcs.push_back({n_in(w), n_out(w), 1});
  for (auto [a, b] : g.arcs) net.arcs.push_back({n_out(a), n_in(b), 1});
  return static_cast<int>(max_flow(net));
}

}  // namespace obsnet
