#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "obsnet/combinatorial.hpp"
#include "obsnet/flows.hpp"
#include "exchange_engine.hpp"

namespace obsnet {

namespace {

constexpr std::int64_t kBig = std::int64_t{1} << 58;

struct SensorSet {
  std::vector<std::uint64_t> words;
  explicit SensorSet(int n = 0) : words((n + 63) / 64, 0) {}
  void set(int i) { words[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(int i) const { return words[i / 64] >> (i % 64) & 1; }
  void intersect(const SensorSet& o) {
    for (std::size_t k = 0; k < words.size(); ++k) words[k] &= o.words[k];
  }
};

struct MiniFlow {
  struct Arc {
    int head;
    std::int64_t cap;
    int rev;
  };
  std::vector<std::vector<Arc>> adj;
  explicit MiniFlow(int n) : adj(n) {}
  void add(int a, int b, std::int64_t cap) {
    adj[a].push_back({b, cap, static_cast<int>(adj[b].size())});
    adj[b].push_back({a, 0, static_cast<int>(adj[a].size()) - 1});
  }
  std::int64_t run(int s, int t) {
    std::int64_t total = 0;
    int n = static_cast<int>(adj.size());
    for (;;) {
      std::vector<int> level(n, -1), it(n, 0);
      std::queue<int> q;
      q.push(s);
      level[s] = 0;
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (const Arc& a : adj[v])
          if (a.cap > 0 && level[a.head] < 0) {
            level[a.head] = level[v] + 1;
            q.push(a.head);
          }
      }
      if (level[t] < 0) return total;
      std::function<std::int64_t(int, std::int64_t)> push = [&](int v,
                                                                std::int64_t lim) -> std::int64_t {
        if (v == t) return lim;
        for (int& i = it[v]; i < static_cast<int>(adj[v].size()); ++i) {
          Arc& a = adj[v][i];
          if (a.cap <= 0 || level[a.head] != level[v] + 1) continue;
          std::int64_t got = push(a.head, std::min(lim, a.cap));
          if (got > 0) {
            a.cap -= got;
            adj[a.head][a.rev].cap += got;
            return got;
          }
        }
        return 0;
      };
      for (;;) {
        std::int64_t got = push(s, kBig);
        if (got == 0) break;
        total += got;
      }
    }
  }
  std::vector<char> source_side_min(int s) const {
    std::vector<char> seen(adj.size(), 0);
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (const Arc& a : adj[v])
        if (a.cap > 0 && !seen[a.head]) {
          seen[a.head] = 1;
          q.push(a.head);
        }
    }
    return seen;
  }
  std::vector<char> sink_reaching(int t) const {
    std::vector<char> seen(adj.size(), 0);
    std::queue<int> q;
    q.push(t);
    seen[t] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      // residual arc into v exists when the forward arc v->head lists spare
      // reverse capacity, i.e. when adj[head][rev].cap > 0 viewed from head;
      // walking adj[v] and testing the reverse arc covers all in-arcs of v.
      for (const Arc& a : adj[v]) {
        const Arc& back = adj[a.head][a.rev];
        if (back.cap > 0 && !seen[a.head]) {
          seen[a.head] = 1;
          q.push(a.head);
        }
      }
    }
    return seen;
  }
};

/// Exchange oracles for (per-sensor out-degree caps) x (the rooted
/// connectivity sparsity matroid). Tight sensor sets are recovered from
/// min-cuts of a small selection network rebuilt each phase.
class RootedOracles final : public ExchangeOracles {
 public:
  RootedOracles(const DynamicGraph& gd, int c) : c_(c), nx_(gd.n_sensors) {
    std::vector<const DynEdge*> ground_edges;
    for (const DynEdge& e : gd.edges)
      if (e.tail.role == Role::Sensor) ground_edges.push_back(&e);
    std::sort(ground_edges.begin(), ground_edges.end(),
              [](const DynEdge* a, const DynEdge* b) { return a->edge_id < b->edge_id; });
    for (const DynEdge* e : ground_edges) {
      edge_id_.push_back(e->edge_id);
      tail_.push_back(e->tail.index);
      head_.push_back(e->head.role == Role::Sensor ? e->head.index : -1);
      cost_.push_back(e->cost.micro);
    }
  }

  int ground_size() const override { return static_cast<int>(edge_id_.size()); }
  std::int64_t benefit(int e) const override { return -cost_[e]; }
  int edge_id(int e) const { return edge_id_[e]; }
  int head_sensor(int e) const { return head_[e]; }

  void set_current(const std::vector<char>& in_set) override {
    in_set_ = in_set;
    outdeg_.assign(nx_, 0);
    xx_.clear();
    in_arcs_.assign(nx_, {});
    members_by_tail_.assign(nx_, {});
    for (int e = 0; e < ground_size(); ++e) {
      if (!in_set[e]) continue;
      ++outdeg_[tail_[e]];
      members_by_tail_[tail_[e]].push_back(e);
      if (head_[e] >= 0) {
        xx_.push_back(e);
        in_arcs_[head_[e]].push_back(e);
      }
    }
    t_max_.assign(nx_, {});
    s_min_.clear();
  }

  bool m1_can_add(int e) override { return outdeg_[tail_[e]] < c_; }
  bool m1_exchange(int z, int e) override {
    return tail_[z] == tail_[e] || outdeg_[tail_[e]] < c_;
  }

  bool m2_can_add(int e) override {
    if (head_[e] < 0) return true;
    return !sees(max_tight(tail_[e]), head_[e]);
  }

  std::vector<int> m2_circuit(int e) override {
    int u = tail_[e], v = head_[e];
    if (v < 0) fail(errc::internal, "circuit requested for an unconstrained arc");
    const SensorSet& tm = max_tight(u);
    // Witness sensors that make a tight set around u count the new arc:
    // v itself, or the tail of a kept arc into v.
    std::vector<std::pair<int, int>> witnesses;  // (sensor, generating arc or -1)
    if (tm.test(v)) witnesses.emplace_back(v, -1);
    for (int p : in_arcs_[v])
      if (tm.test(tail_[p])) witnesses.emplace_back(tail_[p], p);
    if (witnesses.empty()) fail(errc::internal, "dependent arc without a tight witness");

    std::vector<const MinTight*> sets;
    for (auto [w, via] : witnesses) sets.push_back(&min_tight(u, w));
    SensorSet candidates = sets.front()->members;
    for (std::size_t i = 1; i < sets.size(); ++i) candidates.intersect(sets[i]->members);

    std::vector<int> circuit;
    for (int t = 0; t < nx_; ++t) {
      if (!candidates.test(t)) continue;
      for (int z : members_by_tail_[t]) {
        int h = head_[z];
        if (h < 0) continue;  // arcs into outputs never block the sparsity side
        bool ok = true;
        for (std::size_t i = 0; i < witnesses.size() && ok; ++i) {
          if (witnesses[i].second == z) continue;  // z generated this witness
          const MinTight& mt = *sets[i];
          ok = mt.members.test(t) && (mt.members.test(h) || mt.head_count[h] >= 2);
        }
        if (ok) circuit.push_back(z);
      }
    }
    return circuit;
  }

 private:
  struct MinTight {
    SensorSet members;
    std::vector<int> head_count;  // kept arcs from members into each sensor
  };

  bool sees(const SensorSet& s, int v) const {
    if (s.test(v)) return true;
    for (int p : in_arcs_[v])
      if (s.test(tail_[p])) return true;
    return false;
  }

  // Minimizes sum_{u in S} (c - outdeg_xx(u)) + |distinct heads outside S|
  // over sensor sets S containing the forced nodes; equals c exactly on
  // tight sets. Returns the minimal or maximal minimizer.
  SensorSet tight_solve(int forced_a, int forced_b, bool maximal) {
    std::vector<int> outdeg_xx(nx_, 0);
    for (int p : xx_) ++outdeg_xx[tail_[p]];
    int n_nodes = nx_;
    std::vector<int> aux(nx_, -1);
    for (int h = 0; h < nx_; ++h)
      if (!in_arcs_[h].empty()) aux[h] = n_nodes++;
    int s = n_nodes, t = n_nodes + 1;
    MiniFlow net(n_nodes + 2);
    std::int64_t shift = 0;
    for (int u = 0; u < nx_; ++u) {
      std::int64_t pi = c_ - outdeg_xx[u];
      if (pi > 0) net.add(u, t, pi);
      if (pi < 0) {
        net.add(s, u, -pi);
        shift += pi;
      }
    }
    for (int p : xx_) net.add(tail_[p], aux[head_[p]], kBig);
    for (int h = 0; h < nx_; ++h)
      if (aux[h] >= 0) net.add(aux[h], h, 1);
    net.add(s, forced_a, kBig);
    if (forced_b >= 0 && forced_b != forced_a) net.add(s, forced_b, kBig);
    std::int64_t value = net.run(s, t) + shift;
    if (value != c_) fail(errc::internal, "tight set solve value mismatch");
    SensorSet result(nx_);
    if (maximal) {
      std::vector<char> reach_t = net.sink_reaching(t);
      for (int u = 0; u < nx_; ++u)
        if (!reach_t[u]) result.set(u);
    } else {
      std::vector<char> reach_s = net.source_side_min(s);
      for (int u = 0; u < nx_; ++u)
        if (reach_s[u]) result.set(u);
    }
    return result;
  }

  const SensorSet& max_tight(int u) {
    if (!t_max_[u].has_value()) t_max_[u] = tight_solve(u, -1, true);
    return *t_max_[u];
  }

  const MinTight& min_tight(int u, int w) {
    auto key = std::make_pair(u, w);
    auto it = s_min_.find(key);
    if (it != s_min_.end()) return it->second;
    MinTight mt;
    mt.members = tight_solve(u, w, false);
    mt.head_count.assign(nx_, 0);
    for (int p : xx_)
      if (mt.members.test(tail_[p])) ++mt.head_count[head_[p]];
    return s_min_.emplace(key, std::move(mt)).first->second;
  }

  int c_;
  int nx_;
  std::vector<int> edge_id_, tail_, head_;
  std::vector<std::int64_t> cost_;
  std::vector<char> in_set_;
  std::vector<int> outdeg_;
  std::vector<int> xx_;                             // kept sensor-sensor positions
  std::vector<std::vector<int>> in_arcs_;           // kept xx positions by head
  std::vector<std::vector<int>> members_by_tail_;   // kept positions by tail
  std::vector<std::optional<SensorSet>> t_max_;
  std::map<std::pair<int, int>, MinTight> s_min_;
};

}  // namespace

std::vector<int> min_rooted_connected_subgraph(const DynamicGraph& gd, int connectivity) {
  if (connectivity < 1) fail(errc::validation, "connectivity must be >= 1");
  if (gd.n_sensors < 1) fail(errc::validation, "dynamic graph has no sensors");

  int n_outputs = static_cast<int>(gd.outputs.size());
  int fusion = gd.n_sensors + n_outputs;
  SimpleDigraph sd = simple_from_dynamic(gd);
  for (int x = 0; x < gd.n_sensors; ++x) {
    int kappa = local_node_connectivity(sd, x, fusion);
    if (kappa < connectivity)
      fail(errc::infeasible, "sensor " + gd.sensor_names[x] + " has connectivity " +
                                 std::to_string(kappa) + ", below the required " +
                                 std::to_string(connectivity));
  }

  RootedOracles oracles(gd, connectivity);
  std::vector<char> in_set = max_benefit_common_independent(oracles);
  int picked = 0;
  for (char f : in_set) picked += f;
  if (picked != connectivity * gd.n_sensors)
    fail(errc::internal, "rooted subgraph solver fell short of full out-degree");

  std::vector<char> used_output(n_outputs, 0);
  std::vector<int> result;
  for (int e = 0; e < oracles.ground_size(); ++e)
    if (in_set[e]) {
      result.push_back(oracles.edge_id(e));
      if (oracles.head_sensor(e) < 0) {
        // mark the output this arc feeds
        for (const DynEdge& de : gd.edges)
          if (de.edge_id == oracles.edge_id(e)) used_output[de.head.index] = 1;
      }
    }
  for (const DynEdge& de : gd.edges)
    if (de.tail.role == Role::Output && used_output[de.tail.index]) result.push_back(de.edge_id);
  std::sort(result.begin(), result.end());

  // Safety net: re-derive connectivity inside the selected subgraph.
  SimpleDigraph chosen;
  chosen.n_nodes = sd.n_nodes;
  for (const DynEdge& de : gd.edges) {
    if (!std::binary_search(result.begin(), result.end(), de.edge_id)) continue;
    int tail = de.tail.role == Role::Sensor ? de.tail.index : gd.n_sensors + de.tail.index;
    int head = de.head.role == Role::Sensor   ? de.head.index
               : de.head.role == Role::Output ? gd.n_sensors + de.head.index
                                              : fusion;
    chosen.arcs.emplace_back(tail, head);
  }
  for (int x = 0; x < gd.n_sensors; ++x)
    if (local_node_connectivity(chosen, x, fusion) < connectivity)
      fail(errc::internal, "selected subgraph lost connectivity for sensor " +
                               gd.sensor_names[x]);
  return result;
}

}  // namespace obsnet
