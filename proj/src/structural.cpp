#include "obsnet/structural.hpp"

#include <algorithm>
#include <functional>
#include <queue>

#include "json.hpp"

namespace obsnet {

StructuralPair make_structural_pair(std::vector<std::vector<std::uint8_t>> a_pattern,
                                    std::vector<std::vector<std::uint8_t>> c_pattern) {
  StructuralPair s;
  s.n_states = static_cast<int>(a_pattern.size());
  s.a_pattern = std::move(a_pattern);
  s.c_pattern = std::move(c_pattern);
  s.output_index.resize(s.c_pattern.size());
  for (std::size_t r = 0; r < s.c_pattern.size(); ++r)
    for (int j = 0; j < s.n_states; ++j)
      if (s.c_pattern[r][j]) s.output_index[r].sensor = j;
  validate_structural_pair(s);
  return s;
}

void validate_structural_pair(const StructuralPair& s) {
  if (static_cast<int>(s.a_pattern.size()) != s.n_states)
    fail(errc::validation, "structural pair: a_pattern must be N x N");
  for (const auto& row : s.a_pattern)
    if (static_cast<int>(row.size()) != s.n_states)
      fail(errc::validation, "structural pair: a_pattern must be N x N");
  if (s.output_index.size() != s.c_pattern.size())
    fail(errc::validation, "structural pair: output_index size mismatch");
  for (std::size_t r = 0; r < s.c_pattern.size(); ++r) {
    const auto& row = s.c_pattern[r];
    if (static_cast<int>(row.size()) != s.n_states)
      fail(errc::validation, "structural pair: c_pattern rows must have N columns");
    int nonzero = 0, where = -1;
    for (int j = 0; j < s.n_states; ++j)
      if (row[j]) {
        ++nonzero;
        where = j;
      }
    if (nonzero > 1) fail(errc::validation, "structural pair: output rows observe one sensor");
    if (nonzero == 1 && s.output_index[r].sensor != where)
      fail(errc::validation, "structural pair: output row disagrees with its source sensor");
  }
}

namespace {

// Condition (a): every state has a directed path to some output node.
bool all_states_reach_output(const StructuralPair& s) {
  int n = s.n_states;
  std::vector<char> reach(n, 0);
  std::queue<int> bfs;
  for (int r = 0; r < s.n_outputs(); ++r)
    for (int j = 0; j < n; ++j)
      if (s.c_pattern[r][j] && !reach[j]) {
        reach[j] = 1;
        bfs.push(j);
      }
  // Walk arcs backwards: (x_j -> x_i) exists iff a[i][j] = 1.
  while (!bfs.empty()) {
    int i = bfs.front();
    bfs.pop();
    for (int j = 0; j < n; ++j)
      if (s.a_pattern[i][j] && !reach[j]) {
        reach[j] = 1;
        bfs.push(j);
      }
  }
  return std::all_of(reach.begin(), reach.end(), [](char c) { return c != 0; });
}

// Condition (b): generic rank N of the stacked pattern, as column matching.
bool columns_have_full_matching(const StructuralPair& s) {
  int n = s.n_states;
  int rows = n + s.n_outputs();
  std::vector<std::vector<int>> adj(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i)
      if (s.a_pattern[i][j]) adj[j].push_back(i);
    for (int r = 0; r < s.n_outputs(); ++r)
      if (s.c_pattern[r][j]) adj[j].push_back(n + r);
  }
  std::vector<int> match_row(rows, -1), match_col(n, -1);
  std::vector<char> seen(rows, 0);
  std::function<bool(int)> try_col = [&](int j) -> bool {
    for (int i : adj[j]) {
      if (seen[i]) continue;
      seen[i] = 1;
      if (match_row[i] < 0 || try_col(match_row[i])) {
        match_row[i] = j;
        match_col[j] = i;
        return true;
      }
    }
    return false;
  };
  for (int j = 0; j < n; ++j) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!try_col(j)) return false;
  }
  return true;
}

}  // namespace

bool is_structurally_observable(const StructuralPair& s) {
  validate_structural_pair(s);
  if (s.n_states == 0) return true;  // empty system, vacuously observable
  return all_states_reach_output(s) && columns_have_full_matching(s);
}

namespace {

StructuralPair delete_sensors(const StructuralPair& s, const std::vector<int>& u) {
  std::vector<char> removed(s.n_states, 0);
  for (int j : u) removed[j] = 1;
  std::vector<int> keep;
  for (int j = 0; j < s.n_states; ++j)
    if (!removed[j]) keep.push_back(j);

  StructuralPair out;
  out.n_states = static_cast<int>(keep.size());
  out.a_pattern.assign(out.n_states, std::vector<std::uint8_t>(out.n_states, 0));
  for (int i = 0; i < out.n_states; ++i)
    for (int j = 0; j < out.n_states; ++j)
      out.a_pattern[i][j] = s.a_pattern[keep[i]][keep[j]];
  out.c_pattern.assign(s.c_pattern.size(), std::vector<std::uint8_t>(out.n_states, 0));
  out.output_index.assign(s.c_pattern.size(), {});
  for (int r = 0; r < s.n_outputs(); ++r) {
    int src = s.output_index[r].sensor;
    if (src >= 0 && removed[src]) continue;  // deleted sensor: row zeroed
    for (int j = 0; j < out.n_states; ++j) {
      out.c_pattern[r][j] = s.c_pattern[r][keep[j]];
      if (out.c_pattern[r][j]) out.output_index[r].sensor = j;
    }
  }
  return out;
}

}  // namespace

RobustnessCheck robust_structural_observability(const StructuralPair& s, int k) {
  if (k < 0) fail(errc::validation, "robustness parameter must be >= 0");
  int n = s.n_states;
  // Enumeration guard: sum of C(n, j) for j <= k.
  double combos = 0, c = 1;
  for (int j = 0; j <= std::min(k, n); ++j) {
    combos += c;
    c = c * (n - j) / (j + 1);
    if (combos > 2e6) fail(errc::infeasible, "deletion enumeration bound exceeded");
  }

  RobustnessCheck result;
  std::vector<int> u;
  // Depth-first in ascending index order visits candidate sets in
  // lexicographic order of their sorted index vectors, so the first failure
  // found is the lexicographically smallest one.
  std::function<bool(int)> visit = [&](int next) -> bool {
    if (!is_structurally_observable(delete_sensors(s, u))) return true;
    if (static_cast<int>(u.size()) == k) return false;
    for (int j = next; j < n; ++j) {
      u.push_back(j);
      if (visit(j + 1)) return true;
      u.pop_back();
    }
    return false;
  };
  if (visit(0)) {
    result.ok = false;
    result.counterexample = u;
  } else {
    result.ok = true;
  }
  return result;
}

CactusCertificate extract_cactus_certificate(const StructuralPair& s) {
  validate_structural_pair(s);
  int n = s.n_states;
  CactusCertificate cert;

  // Multi-source BFS from output nodes over reversed arcs builds an
  // in-forest: each covered state remembers the first arc found toward its
  // output. Scanning outputs then states in ascending order keeps it
  // deterministic.
  struct Parent {
    bool to_output = false;
    int target = -1;  // output row or state index
    int depth = 0;
    int tree = -1;  // owning output row
  };
  std::vector<Parent> parent(n);
  std::vector<char> covered(n, 0);
  std::queue<int> bfs;
  for (int r = 0; r < s.n_outputs(); ++r)
    for (int j = 0; j < n; ++j)
      if (s.c_pattern[r][j] && !covered[j]) {
        covered[j] = 1;
        parent[j] = {true, r, 1, r};
        bfs.push(j);
      }
  while (!bfs.empty()) {
    int i = bfs.front();
    bfs.pop();
    for (int j = 0; j < n; ++j)
      if (j != i && s.a_pattern[i][j] && !covered[j]) {
        covered[j] = 1;
        parent[j] = {false, i, parent[i].depth + 1, parent[i].tree};
        bfs.push(j);
      }
  }

  // One stem per populated tree: start from the first depth-1 state and
  // extend away from the output while a tree child exists.
  std::vector<char> placed(n, 0);
  std::vector<int> stem_of_output(s.n_outputs(), -1);
  for (int r = 0; r < s.n_outputs(); ++r) {
    int head = -1;
    for (int j = 0; j < n && head < 0; ++j)
      if (covered[j] && parent[j].to_output && parent[j].target == r) head = j;
    if (head < 0) continue;
    CactusStem stem;
    stem.output_row = r;
    std::vector<int> rev{head};
    for (;;) {
      int tip = rev.back(), child = -1;
      for (int j = 0; j < n && child < 0; ++j)
        if (covered[j] && !parent[j].to_output && parent[j].target == tip && !placed[j] &&
            j != tip)
          child = j;
      if (child < 0) break;
      rev.push_back(child);
      placed[child] = 1;  // reserve so sibling scan skips it
    }
    stem.states.assign(rev.rbegin(), rev.rend());
    for (int j : stem.states) placed[j] = 1;
    stem_of_output[r] = static_cast<int>(cert.stems.size());
    cert.stems.push_back(std::move(stem));
  }

  // Remaining covered states attach as cycles, parents first. States with a
  // self-loop attach alone via their tree arc; others need a directed cycle
  // of unplaced states with a link into the placed part.
  std::vector<int> order;
  for (int j = 0; j < n; ++j)
    if (covered[j] && !placed[j]) order.push_back(j);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (parent[a].depth != parent[b].depth) return parent[a].depth < parent[b].depth;
    return a < b;
  });
  for (int j : order) {
    if (placed[j]) continue;
    bool parent_placed =
        parent[j].to_output || placed[parent[j].target];
    if (s.a_pattern[j][j] && parent_placed) {
      CactusCycle cyc;
      cyc.states = {j};
      cyc.attach_from = j;
      cyc.attach_to_output = parent[j].to_output;
      cyc.attach_to = parent[j].target;
      placed[j] = 1;
      cert.cycles.push_back(std::move(cyc));
    }
  }
  // Multi-state cycles for whatever is left: breadth-first search for a
  // shortest directed cycle through each candidate, attached via any arc
  // into the placed set.
  for (bool progress = true; progress;) {
    progress = false;
    for (int j = 0; j < n; ++j) {
      if (!covered[j] || placed[j]) continue;
      // Find shortest cycle j -> ... -> j among unplaced states.
      std::vector<int> prev(n, -1);
      std::queue<int> q2;
      q2.push(j);
      std::vector<char> seen(n, 0);
      seen[j] = 1;
      int closer = -1;  // state with arc back into j
      while (!q2.empty() && closer < 0) {
        int u = q2.front();
        q2.pop();
        if (u != j && s.a_pattern[j][u]) {  // arc u -> j closes the cycle
          closer = u;
          break;
        }
        for (int v = 0; v < n; ++v)
          if (v != u && v != j && s.a_pattern[v][u] && !placed[v] && covered[v] && !seen[v]) {
            seen[v] = 1;
            prev[v] = u;
            q2.push(v);
          }
      }
      if (closer < 0) continue;
      std::vector<int> cyc_states;
      for (int v = closer; v != -1; v = prev[v]) cyc_states.push_back(v);
      std::reverse(cyc_states.begin(), cyc_states.end());  // j .. closer
      // Attachment link: any arc from a cycle state into the placed set or
      // an output the cycle state feeds.
      int attach_from = -1, attach_to = -1;
      bool attach_out = false;
      for (int v : cyc_states) {
        for (int r = 0; r < s.n_outputs() && attach_from < 0; ++r)
          if (s.c_pattern[r][v] && stem_of_output[r] >= 0) {
            attach_from = v;
            attach_out = true;
            attach_to = r;
          }
        for (int w = 0; w < n && attach_from < 0; ++w)
          if (w != v && s.a_pattern[w][v] && placed[w]) {
            attach_from = v;
            attach_to = w;
          }
        if (attach_from >= 0) break;
      }
      if (attach_from < 0) continue;
      CactusCycle cyc;
      cyc.states = cyc_states;
      cyc.attach_from = attach_from;
      cyc.attach_to_output = attach_out;
      cyc.attach_to = attach_to;
      for (int v : cyc_states) placed[v] = 1;
      cert.cycles.push_back(std::move(cyc));
      progress = true;
    }
  }

  for (int j = 0; j < n; ++j)
    if (!placed[j]) cert.uncovered.push_back(j);
  return cert;
}

bool validate_certificate(const StructuralPair& s, const CactusCertificate& cert) {
  int n = s.n_states;
  std::vector<char> used_state(n, 0);
  std::vector<char> used_output(s.n_outputs(), 0);
  auto arc_exists = [&](int from, int to) {
    return from >= 0 && to >= 0 && from < n && to < n && s.a_pattern[to][from] != 0;
  };

  for (const CactusStem& stem : cert.stems) {
    if (stem.states.empty()) return false;
    if (stem.output_row < 0 || stem.output_row >= s.n_outputs()) return false;
    if (used_output[stem.output_row]) return false;
    used_output[stem.output_row] = 1;
    for (std::size_t i = 0; i < stem.states.size(); ++i) {
      int v = stem.states[i];
      if (v < 0 || v >= n || used_state[v]) return false;
      used_state[v] = 1;
      if (i + 1 < stem.states.size() && !arc_exists(v, stem.states[i + 1])) return false;
    }
    if (!s.c_pattern[stem.output_row][stem.states.back()]) return false;
  }

  for (const CactusCycle& cyc : cert.cycles) {
    if (cyc.states.empty()) return false;
    std::vector<char> in_cycle(n, 0);
    for (int v : cyc.states) {
      if (v < 0 || v >= n || used_state[v] || in_cycle[v]) return false;
      in_cycle[v] = 1;
    }
    for (std::size_t i = 0; i < cyc.states.size(); ++i) {
      int v = cyc.states[i];
      int w = cyc.states[(i + 1) % cyc.states.size()];
      if (cyc.states.size() == 1) {
        if (!s.a_pattern[v][v]) return false;
      } else if (!arc_exists(v, w)) {
        return false;
      }
    }
    bool from_in_cycle = false;
    for (int v : cyc.states) from_in_cycle |= (v == cyc.attach_from);
    if (!from_in_cycle) return false;
    if (cyc.attach_to_output) {
      if (cyc.attach_to < 0 || cyc.attach_to >= s.n_outputs()) return false;
      if (!used_output[cyc.attach_to]) return false;  // cactus must exist
      if (!s.c_pattern[cyc.attach_to][cyc.attach_from]) return false;
    } else {
      if (cyc.attach_to < 0 || cyc.attach_to >= n) return false;
      if (!used_state[cyc.attach_to]) return false;  // attached part built first
      if (!arc_exists(cyc.attach_from, cyc.attach_to)) return false;
    }
    for (int v : cyc.states) used_state[v] = 1;
  }

  std::vector<char> uncovered_flag(n, 0);
  for (int v : cert.uncovered) {
    if (v < 0 || v >= n || used_state[v]) return false;
    uncovered_flag[v] = 1;
  }
  for (int v = 0; v < n; ++v)
    if (!used_state[v] && !uncovered_flag[v]) return false;
  return true;
}

std::string certificate_to_json(const CactusCertificate& cert) {
  nlohmann::ordered_json doc;
  doc["stems"] = nlohmann::ordered_json::array();
  for (const auto& stem : cert.stems) {
    nlohmann::ordered_json js;
    js["states"] = stem.states;
    js["output_row"] = stem.output_row;
    doc["stems"].push_back(js);
  }
  doc["cycles"] = nlohmann::ordered_json::array();
  for (const auto& cyc : cert.cycles) {
    nlohmann::ordered_json jc;
    jc["states"] = cyc.states;
    jc["attach_from"] = cyc.attach_from;
    jc["attach_to"] = cyc.attach_to;
    jc["attach_to_output"] = cyc.attach_to_output;
    doc["cycles"].push_back(jc);
  }
  doc["uncovered"] = cert.uncovered;
  return doc.dump(2) + "\n";
}

}  // namespace obsnet
