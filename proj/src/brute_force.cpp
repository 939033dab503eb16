#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "obsnet/combinatorial.hpp"
#include "obsnet/pipeline.hpp"

namespace obsnet {

namespace {

// A candidate route leaves a sensor, relays through the masked sensors, and
// exits on one selected backbone link.
struct Route {
  std::uint64_t relays;
  int exit;  // index into the selection
};

void collect_routes(int at, std::uint64_t relays,
                    const std::vector<std::vector<int>>& hops,
                    const std::vector<std::vector<int>>& exits,
                    const std::vector<int>& slot, std::vector<Route>& out) {
  for (int e : exits[at]) out.push_back({relays, e});
  for (int next : hops[at]) {
    if (slot[next] < 0) continue;
    std::uint64_t bit = std::uint64_t(1) << slot[next];
    if (relays & bit) continue;
    collect_routes(next, relays | bit, hops, exits, slot, out);
  }
}

bool pack_routes(const std::vector<Route>& routes, std::size_t i, int need,
                 std::uint64_t relays, std::uint32_t exits) {
  if (need == 0) return true;
  if (routes.size() - i < static_cast<std::size_t>(need)) return false;
  const Route& r = routes[i];
  if (!(r.relays & relays) && !(exits >> r.exit & 1) &&
      pack_routes(routes, i + 1, need - 1, relays | r.relays, exits | (1u << r.exit)))
    return true;
  return pack_routes(routes, i + 1, need, relays, exits);
}

}  // namespace

// Testing oracle: enumerates every subset of the selectable links and keeps
// the cheapest one that gives every sensor k+1 separately relayed routes to
// the fusion centre and whose induced structural pair survives all deletions
// of up to k sensors. Deliberately shares no machinery with the optimizer.
std::optional<BruteForceResult> brute_force_min_structure(const PhysicalGraph& g, int k) {
  if (k < 0) fail(errc::validation, "robustness parameter must be >= 0");
  validate_physical_graph(g);
  if (g.edges.size() > 16) fail(errc::validation, "enumeration bound exceeded: more than 16 edges");

  BackboneRoutes routes = backbone_shortest_paths(g);

  struct Pick {
    int edge_id;
    bool to_backbone;
    int tail;      // sensor index
    int head;      // sensor index, or backbone index when to_backbone
    Cost price;    // link cost, plus the route cost for backbone links
  };
  std::vector<Pick> picks;
  for (const Edge& e : g.edges) {
    EdgeKind kind = g.edge_kind(e);
    if (kind == EdgeKind::SensorSensor)
      picks.push_back({e.edge_id, false, e.tail.index, e.head.index, e.cost});
    else if (kind == EdgeKind::SensorBackbone) {
      auto it = routes.dist.find(e.head.index);
      if (it == routes.dist.end()) continue;  // output could never reach the fusion centre
      picks.push_back({e.edge_id, true, e.tail.index, e.head.index, e.cost + it->second});
    }
  }
  std::sort(picks.begin(), picks.end(),
            [](const Pick& a, const Pick& b) { return a.edge_id < b.edge_id; });

  int n = g.n_sensors();
  int s = static_cast<int>(picks.size());

  std::vector<int> slot(n, -1);
  int slots = 0;
  for (const Pick& p : picks) {
    if (slot[p.tail] < 0) slot[p.tail] = slots++;
    if (!p.to_backbone && slot[p.head] < 0) slot[p.head] = slots++;
  }

  auto enough_routes = [&](std::uint32_t mask) {
    std::vector<std::vector<int>> hops(n), exits(n);
    for (int b = 0; b < s; ++b) {
      if (!(mask >> b & 1)) continue;
      const Pick& p = picks[b];
      if (p.to_backbone)
        exits[p.tail].push_back(b);
      else
        hops[p.tail].push_back(p.head);
    }
    for (int x = 0; x < n; ++x) {
      std::uint64_t start = slot[x] >= 0 ? std::uint64_t(1) << slot[x] : 0;
      std::vector<Route> routes;
      collect_routes(x, start, hops, exits, slot, routes);
      for (Route& r : routes) r.relays &= ~start;
      if (!pack_routes(routes, 0, k + 1, 0, 0)) return false;
    }
    return true;
  };

  std::optional<BruteForceResult> best;
  for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << s); ++mask) {
    Cost total{0};
    StructuralPair pair;
    pair.n_states = n;
    pair.a_pattern.assign(n, std::vector<std::uint8_t>(n, 0));
    for (int i = 0; i < n; ++i) pair.a_pattern[i][i] = 1;
    for (int b = 0; b < s; ++b) {
      if (!(mask >> b & 1)) continue;
      const Pick& p = picks[b];
      total += p.price;
      if (p.to_backbone) {
        pair.c_pattern.emplace_back(n, 0);
        pair.c_pattern.back()[p.tail] = 1;
        pair.output_index.push_back({p.tail, p.head, p.edge_id});
      } else {
        pair.a_pattern[p.head][p.tail] = 1;
      }
    }
    if (best && best->cost <= total) continue;
    if (!enough_routes(mask)) continue;
    if (!robust_structural_observability(pair, k).ok) continue;

    std::set<int> used;
    for (int b = 0; b < s; ++b) {
      if (!(mask >> b & 1)) continue;
      used.insert(picks[b].edge_id);
      if (picks[b].to_backbone)
        for (int id : backbone_route_edges(g, routes, picks[b].head)) used.insert(id);
    }
    best = BruteForceResult{total, {used.begin(), used.end()}};
  }
  return best;
}

}  // namespace obsnet
