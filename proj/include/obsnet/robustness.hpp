#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "obsnet/graph_model.hpp"
#include "obsnet/pipeline.hpp"

namespace obsnet {

/// True iff some surviving sensor loses every directed path, inside the
/// designed used sensor subnetwork with the failed nodes removed, to a used
/// output whose source sensor also survives.
bool network_fails(const DesignSolution& sol, const std::vector<int>& failed_sensors);

struct CurveConfig {
  int n_sensors = 0;
  int n_backbone = 0;
  double radius = 0.0;
  CostModel cost_model = CostModel::DistanceSquared;
  int k = 0;
  std::uint64_t seed = 0;
};

struct CurvePoint {
  int failures = 0;     // l
  double ratio = 0.0;   // l / n_sensors
  double prob = 0.0;
  int trials = 0;       // per graph
  int graphs = 0;
};

struct RobustnessCurve {
  CurveConfig config;
  std::vector<CurvePoint> points;  // l = 0 .. ceil(n_sensors / 2)
  int redraws = 0;                 // infeasible generations that were replaced
};

/// Monte Carlo failure-probability estimate: n_graphs random geometric
/// instances designed at robustness k, n_trials uniform failure sets per
/// graph and per failure count. Infeasible generations are redrawn from a
/// separate seed stream (budget 256 per slot).
RobustnessCurve failure_curve(int n_sensors, int n_backbone, double radius,
                              CostModel cost_model, int k, int n_graphs, int n_trials,
                              std::uint64_t seed);

/// Same estimator for several k values over one shared graph population
/// (feasibility filtered at the largest k) and shared failure draws, so the
/// curves are directly comparable.
std::vector<RobustnessCurve> failure_curve_family(int n_sensors, int n_backbone, double radius,
                                                  CostModel cost_model,
                                                  const std::vector<int>& ks, int n_graphs,
                                                  int n_trials, std::uint64_t seed);

std::string curve_to_csv(const RobustnessCurve& curve);

}  // namespace obsnet
