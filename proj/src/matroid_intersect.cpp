#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>

#include "obsnet/combinatorial.hpp"
#include "exchange_engine.hpp"

namespace obsnet {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

struct Label {
  std::int64_t dist = kInf;
  int hops = 0;
  int pred = -1;
  bool reached() const { return dist < kInf; }
  bool improves(const Label& other) const {
    if (dist != other.dist) return dist < other.dist;
    if (hops != other.hops) return hops < other.hops;
    return pred < other.pred;
  }
};

}  // namespace

std::vector<char> max_benefit_common_independent(ExchangeOracles& oracles) {
  const int n = oracles.ground_size();
  std::vector<char> in_set(n, 0);
  if (n == 0) return in_set;

  std::vector<std::int64_t> node_len(n, 0);
  std::vector<Label> label(n);
  std::vector<char> is_sink(n, 0);
  std::vector<char> arcs_ready(n, 0);
  std::vector<std::vector<int>> arcs(n);

  for (;;) {
    oracles.set_current(in_set);
    for (int e = 0; e < n; ++e) {
      node_len[e] = in_set[e] ? oracles.benefit(e) : -oracles.benefit(e);
      label[e] = Label{};
      is_sink[e] = 0;
      arcs_ready[e] = 0;
      arcs[e].clear();
    }
    for (int e = 0; e < n; ++e) {
      if (in_set[e]) continue;
      if (oracles.m1_can_add(e)) label[e] = Label{node_len[e], 0, -1};
      if (oracles.m2_can_add(e)) is_sink[e] = 1;
    }

    auto out_arcs = [&](int u) -> const std::vector<int>& {
      if (!arcs_ready[u]) {
        arcs_ready[u] = 1;
        if (in_set[u]) {
          for (int e = 0; e < n; ++e)
            if (!in_set[e] && oracles.m1_exchange(u, e)) arcs[u].push_back(e);
        } else if (!is_sink[u]) {
          arcs[u] = oracles.m2_circuit(u);
          std::sort(arcs[u].begin(), arcs[u].end());
        }
      }
      return arcs[u];
    };

    // Deterministic label-correcting sweeps; fixed point is the
    // (dist, hops, pred)-lexicographic shortest path tree.
    bool changed = true;
    int guard = 2 * n + 8;
    while (changed) {
      if (--guard < 0) fail(errc::internal, "augmenting path search did not converge");
      changed = false;
      for (int u = 0; u < n; ++u) {
        if (!label[u].reached()) continue;
        for (int v : out_arcs(u)) {
          Label cand{label[u].dist + node_len[v], label[u].hops + 1, u};
          if (cand.improves(label[v])) {
            label[v] = cand;
            changed = true;
          }
        }
      }
    }

    int best = -1;
    for (int e = 0; e < n; ++e) {
      if (!is_sink[e] || in_set[e] || !label[e].reached()) continue;
      if (best < 0 || label[e].improves(label[best])) best = e;
    }
    if (best < 0) break;
    for (int v = best; v >= 0; v = label[v].pred) in_set[v] ^= 1;
  }
  return in_set;
}

PartitionMatroid::PartitionMatroid(std::vector<int> ground,
                                   std::vector<std::pair<std::vector<int>, int>> classes)
    : ground_(std::move(ground)), classes_(std::move(classes)) {
  std::vector<int> sorted = ground_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail(errc::validation, "partition matroid: duplicate ground element");
  std::vector<int> seen;
  for (const auto& [members, cap] : classes_) {
    if (cap < 0) fail(errc::validation, "partition matroid: negative capacity");
    for (int e : members) {
      if (!std::binary_search(sorted.begin(), sorted.end(), e))
        fail(errc::validation, "partition matroid: class member outside ground set");
      seen.push_back(e);
    }
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    fail(errc::validation, "partition matroid: classes overlap");
}

bool PartitionMatroid::is_independent(const std::vector<int>& subset) const {
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    int count = 0;
    for (int e : subset)
      if (std::find(classes_[c].first.begin(), classes_[c].first.end(), e) !=
          classes_[c].first.end())
        ++count;
    if (count > classes_[c].second) return false;
  }
  return true;
}

RootedConnectivityMatroid::RootedConnectivityMatroid(const DynamicGraph& gd, int connectivity)
    : c_(connectivity), n_sensors_(gd.n_sensors) {
  if (c_ < 1) fail(errc::validation, "connectivity must be >= 1");
  int max_id = -1;
  for (const DynEdge& e : gd.edges) max_id = std::max(max_id, e.edge_id);
  pos_of_edge_.assign(max_id + 1, -1);
  for (const DynEdge& e : gd.edges) {
    if (e.tail.role != Role::Sensor) continue;
    pos_of_edge_[e.edge_id] = static_cast<int>(ground_.size());
    ground_.push_back(e.edge_id);
    tail_.push_back(e.tail.index);
    head_.push_back(e.head.role == Role::Sensor ? e.head.index : -1);
  }
}

bool RootedConnectivityMatroid::is_independent(const std::vector<int>& subset) const {
  // Sensor-to-sensor arcs of the subset; arcs into outputs never constrain.
  std::vector<std::pair<int, int>> xx;
  for (int id : subset) {
    if (id < 0 || id >= static_cast<int>(pos_of_edge_.size()) || pos_of_edge_[id] < 0)
      fail(errc::validation, "subset element outside the matroid ground set");
    int p = pos_of_edge_[id];
    if (head_[p] >= 0) xx.emplace_back(tail_[p], head_[p]);
  }
  if (xx.empty()) return true;

  // Only sensors incident to kept arcs can participate in a violated set.
  std::vector<int> involved;
  for (auto [t, h] : xx) {
    involved.push_back(t);
    involved.push_back(h);
  }
  std::sort(involved.begin(), involved.end());
  involved.erase(std::unique(involved.begin(), involved.end()), involved.end());
  int m = static_cast<int>(involved.size());
  if (m > 20) fail(errc::validation, "connectivity matroid enumeration guard exceeded");
  std::vector<int> slot(n_sensors_, -1);
  for (int i = 0; i < m; ++i) slot[involved[i]] = i;

  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    int out = 0;
    std::uint32_t heads_outside = 0;
    for (auto [t, h] : xx) {
      if (!(mask >> slot[t] & 1)) continue;
      ++out;
      if (!(mask >> slot[h] & 1)) heads_outside |= 1u << slot[h];
    }
    int distinct = __builtin_popcount(heads_outside);
    int size = __builtin_popcount(mask);
    if (out - distinct > c_ * size - c_) return false;
  }
  return true;
}

namespace {

class DefinitionalOracles final : public ExchangeOracles {
 public:
  DefinitionalOracles(const Matroid& m1, const Matroid& m2, std::vector<int> ground,
                      const std::map<int, Cost>& benefits)
      : m1_(m1), m2_(m2), ground_(std::move(ground)) {
    benefit_.assign(ground_.size(), 0);
    for (std::size_t i = 0; i < ground_.size(); ++i) {
      auto it = benefits.find(ground_[i]);
      if (it != benefits.end()) benefit_[i] = it->second.micro;
    }
  }

  int ground_size() const override { return static_cast<int>(ground_.size()); }
  std::int64_t benefit(int e) const override { return benefit_[e]; }

  void set_current(const std::vector<char>& in_set) override {
    in_set_ = in_set;
    current_.clear();
    for (std::size_t i = 0; i < in_set.size(); ++i)
      if (in_set[i]) current_.push_back(ground_[i]);
  }

  bool m1_can_add(int e) override { return m1_.is_independent(with(e)); }
  bool m2_can_add(int e) override { return m2_.is_independent(with(e)); }
  bool m1_exchange(int z, int e) override { return m1_.is_independent(swapped(z, e)); }

  std::vector<int> m2_circuit(int e) override {
    std::vector<int> out;
    for (std::size_t i = 0; i < in_set_.size(); ++i)
      if (in_set_[i] && m2_.is_independent(swapped(static_cast<int>(i), e)))
        out.push_back(static_cast<int>(i));
    return out;
  }

 private:
  std::vector<int> with(int e) const {
    std::vector<int> v = current_;
    v.insert(std::upper_bound(v.begin(), v.end(), ground_[e]), ground_[e]);
    return v;
  }
  std::vector<int> swapped(int z, int e) const {
    std::vector<int> v = with(e);
    v.erase(std::find(v.begin(), v.end(), ground_[z]));
    return v;
  }

  const Matroid& m1_;
  const Matroid& m2_;
  std::vector<int> ground_;
  std::vector<std::int64_t> benefit_;
  std::vector<char> in_set_;
  std::vector<int> current_;
};

}  // namespace

std::vector<int> weighted_matroid_intersection(const Matroid& m1, const Matroid& m2,
                                               const std::map<int, Cost>& benefits) {
  std::vector<int> g1 = m1.ground_set(), g2 = m2.ground_set();
  std::sort(g1.begin(), g1.end());
  std::sort(g2.begin(), g2.end());
  if (g1 != g2) fail(errc::validation, "matroid intersection requires a shared ground set");
  if (std::adjacent_find(g1.begin(), g1.end()) != g1.end())
    fail(errc::validation, "matroid intersection: duplicate ground element");

  DefinitionalOracles oracles(m1, m2, g1, benefits);
  std::vector<char> in_set = max_benefit_common_independent(oracles);
  std::vector<int> out;
  for (std::size_t i = 0; i < in_set.size(); ++i)
    if (in_set[i]) out.push_back(g1[i]);
  return out;
}

}  // namespace obsnet
