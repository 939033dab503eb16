#include "obsnet/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "obsnet/flows.hpp"

namespace obsnet {

namespace {

// keeps graph-generation redraw seeds out of the trial seed stream
constexpr std::uint64_t kGenerationSalt = 0x8f0c26ad53a4c9b1ULL;

}  // namespace

bool network_fails(const DesignSolution& sol, const std::vector<int>& failed_sensors) {
  const StructuralPair& s = sol.structure;
  int n = s.n_states;
  std::vector<char> dead(n, 0);
  for (int x : failed_sensors) {
    if (x < 0 || x >= n) fail(errc::validation, "failed sensor index out of range");
    dead[x] = 1;
  }

  // reverse reachability from surviving sensors that feed a used output
  std::vector<char> reached(n, 0);
  std::vector<int> queue;
  for (int r = 0; r < s.n_outputs(); ++r)
    for (int j = 0; j < n; ++j)
      if (s.c_pattern[r][j] && !dead[j] && !reached[j]) {
        reached[j] = 1;
        queue.push_back(j);
      }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int i = queue[head];
    for (int j = 0; j < n; ++j)
      if (j != i && s.a_pattern[i][j] && !dead[j] && !reached[j]) {
        reached[j] = 1;
        queue.push_back(j);
      }
  }
  for (int j = 0; j < n; ++j)
    if (!dead[j] && !reached[j]) return true;
  return false;
}

std::vector<RobustnessCurve> failure_curve_family(int n_sensors, int n_backbone, double radius,
                                                  CostModel cost_model,
                                                  const std::vector<int>& ks, int n_graphs,
                                                  int n_trials, std::uint64_t seed) {
  if (n_sensors < 1 || n_backbone < 1) fail(errc::validation, "need sensors and backbone nodes");
  if (!(radius > 0.0) || radius > std::sqrt(2.0) + 1e-12)
    fail(errc::validation, "radius must lie in (0, sqrt(2)]");
  if (ks.empty()) fail(errc::validation, "need at least one robustness value");
  for (int k : ks)
    if (k < 0) fail(errc::validation, "robustness parameter must be >= 0");
  if (n_graphs < 1 || n_trials < 1) fail(errc::validation, "need graphs and trials");

  int k_max = *std::max_element(ks.begin(), ks.end());
  int l_max = (n_sensors + 1) / 2;
  std::vector<std::vector<long long>> fail_count(ks.size(),
                                                 std::vector<long long>(l_max + 1, 0));
  int redraws = 0;

  for (int gi = 0; gi < n_graphs; ++gi) {
    PhysicalGraph g;
    bool found = false;
    for (int attempt = 0; attempt < 256; ++attempt) {
      std::uint64_t gseed = mix_seed(seed ^ kGenerationSalt, std::uint64_t(gi), attempt);
      g = random_geometric(n_sensors, n_backbone, radius, cost_model, gseed);
      auto mk = max_robustness(g);
      if (mk && *mk >= k_max) {
        found = true;
        break;
      }
      ++redraws;
    }
    if (!found)
      fail(errc::infeasible,
           "graph generation stayed infeasible for k=" + std::to_string(k_max) +
               " after 256 redraws");

    std::vector<DesignSolution> designs;
    designs.reserve(ks.size());
    for (int k : ks) designs.push_back(design(g, k));

    std::vector<int> pool(n_sensors);
    for (int t = 0; t < n_trials; ++t) {
      rng trial_rng(mix_seed(seed, std::uint64_t(gi), std::uint64_t(t)));
      for (int l = 0; l <= l_max; ++l) {
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < l; ++i) {
          int j = i + static_cast<int>(trial_rng.next_below(n_sensors - i));
          std::swap(pool[i], pool[j]);
        }
        std::vector<int> failed(pool.begin(), pool.begin() + l);
        for (std::size_t ki = 0; ki < ks.size(); ++ki)
          if (network_fails(designs[ki], failed)) ++fail_count[ki][l];
      }
    }
  }

  long long samples = static_cast<long long>(n_graphs) * n_trials;
  std::vector<RobustnessCurve> curves;
  for (std::size_t ki = 0; ki < ks.size(); ++ki) {
    RobustnessCurve curve;
    curve.config = {n_sensors, n_backbone, radius, cost_model, ks[ki], seed};
    curve.redraws = redraws;
    for (int l = 0; l <= l_max; ++l) {
      if (l <= ks[ki] && fail_count[ki][l] != 0)
        fail(errc::internal, "failure observed inside the robustness guarantee");
      CurvePoint p;
      p.failures = l;
      p.ratio = static_cast<double>(l) / n_sensors;
      p.prob = static_cast<double>(fail_count[ki][l]) / static_cast<double>(samples);
      p.trials = n_trials;
      p.graphs = n_graphs;
      curve.points.push_back(p);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

RobustnessCurve failure_curve(int n_sensors, int n_backbone, double radius, CostModel cost_model,
                              int k, int n_graphs, int n_trials, std::uint64_t seed) {
  return failure_curve_family(n_sensors, n_backbone, radius, cost_model, {k}, n_graphs,
                              n_trials, seed)
      .front();
}

std::string curve_to_csv(const RobustnessCurve& curve) {
  std::string out = "l,ratio,prob,trials,graphs\n";
  char buf[128];
  for (const CurvePoint& p : curve.points) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%d,%d\n", p.failures, p.ratio, p.prob,
                  p.trials, p.graphs);
    out += buf;
  }
  return out;
}

}  // namespace obsnet
