#include <algorithm>
#include <cstdint>
#include <queue>
#include <vector>

#include "obsnet/combinatorial.hpp"

namespace obsnet {

namespace {

struct WorkArc {
  int tail, head;
  std::int64_t cost;
  int edge_id;  // original id, used for tie-breaks and the result
};

// One contraction level: pick each node's cheapest out-arc, contract one
// selected cycle if present, recurse, then re-expand.
std::vector<int> solve(int n, int root, std::vector<WorkArc> arcs) {
  std::vector<int> best(n, -1);  // index into arcs
  for (int a = 0; a < static_cast<int>(arcs.size()); ++a) {
    const WorkArc& w = arcs[a];
    if (w.tail == root || w.tail == w.head) continue;
    if (best[w.tail] < 0 || std::make_pair(w.cost, w.edge_id) <
                                std::make_pair(arcs[best[w.tail]].cost, arcs[best[w.tail]].edge_id))
      best[w.tail] = a;
  }
  for (int v = 0; v < n; ++v)
    if (v != root && best[v] < 0) fail(errc::infeasible, "a node cannot reach the root");

  // Walk successor pointers to find a cycle of selected arcs.
  std::vector<int> state(n, 0);  // 0 unseen, 1 on path, 2 done
  state[root] = 2;
  std::vector<int> cycle;
  for (int start = 0; start < n && cycle.empty(); ++start) {
    int v = start;
    std::vector<int> path;
    while (state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = arcs[best[v]].head;
    }
    if (state[v] == 1) {
      auto it = std::find(path.begin(), path.end(), v);
      cycle.assign(it, path.end());
    }
    for (int u : path) state[u] = 2;
  }

  if (cycle.empty()) {
    std::vector<int> chosen;
    for (int v = 0; v < n; ++v)
      if (v != root) chosen.push_back(arcs[best[v]].edge_id);
    return chosen;
  }

  std::vector<char> in_cycle(n, 0);
  for (int v : cycle) in_cycle[v] = 1;
  std::vector<int> comp(n);
  int next = 0;
  for (int v = 0; v < n; ++v)
    if (!in_cycle[v]) comp[v] = next++;
  int super = next++;
  for (int v : cycle) comp[v] = super;

  std::vector<WorkArc> contracted;
  for (const WorkArc& w : arcs) {
    int ct = comp[w.tail], ch = comp[w.head];
    if (ct == ch) continue;
    WorkArc nw{ct, ch, w.cost, w.edge_id};
    if (in_cycle[w.tail]) nw.cost = w.cost - arcs[best[w.tail]].cost;
    contracted.push_back(nw);
  }

  std::vector<int> inner = solve(next, comp[root], std::move(contracted));

  // Arcs selected in the contracted graph displace one cycle selection each.
  std::vector<int> chosen = inner;
  std::vector<char> dropped(n, 0);
  for (int id : inner) {
    for (const WorkArc& w : arcs)
      if (w.edge_id == id && in_cycle[w.tail]) {
        dropped[w.tail] = 1;
        break;
      }
  }
  for (int v : cycle)
    if (!dropped[v]) chosen.push_back(arcs[best[v]].edge_id);
  return chosen;
}

}  // namespace

ArborescenceResult min_spanning_arborescence(const WeightedDigraph& g, int root) {
  if (root < 0 || root >= g.n_nodes) fail(errc::validation, "arborescence root out of range");
  std::vector<int> seen_ids;
  for (const auto& a : g.arcs) {
    if (a.tail < 0 || a.tail >= g.n_nodes || a.head < 0 || a.head >= g.n_nodes)
      fail(errc::validation, "arborescence arc endpoint out of range");
    if (a.cost.micro < 0) fail(errc::validation, "arborescence arc cost negative");
    seen_ids.push_back(a.edge_id);
  }
  std::sort(seen_ids.begin(), seen_ids.end());
  if (std::adjacent_find(seen_ids.begin(), seen_ids.end()) != seen_ids.end())
    fail(errc::validation, "arborescence arcs need distinct edge ids");

  // Every node must have a directed path to the root.
  std::vector<std::vector<int>> rev(g.n_nodes);
  for (const auto& a : g.arcs) rev[a.head].push_back(a.tail);
  std::vector<char> reach(g.n_nodes, 0);
  std::queue<int> bfs;
  bfs.push(root);
  reach[root] = 1;
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int u : rev[v])
      if (!reach[u]) {
        reach[u] = 1;
        bfs.push(u);
      }
  }
  for (int v = 0; v < g.n_nodes; ++v)
    if (!reach[v]) fail(errc::infeasible, "node " + std::to_string(v) + " cannot reach the root");

  std::vector<WorkArc> arcs;
  for (const auto& a : g.arcs) arcs.push_back({a.tail, a.head, a.cost.micro, a.edge_id});

  ArborescenceResult result;
  result.root = root;
  result.total_cost = Cost{0};
  if (g.n_nodes > 1) result.edges = solve(g.n_nodes, root, std::move(arcs));
  std::sort(result.edges.begin(), result.edges.end());
  for (int id : result.edges)
    for (const auto& a : g.arcs)
      if (a.edge_id == id) result.total_cost += a.cost;
  return result;
}

}  // namespace obsnet
