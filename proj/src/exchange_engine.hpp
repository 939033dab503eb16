#pragma once

#include <cstdint>
#include <vector>

namespace obsnet {

/// Oracle surface consumed by the augmenting-path engine. Ground elements
/// are positions 0..n-1; the engine owns the current set and announces it
/// through set_current before issuing queries for a phase.
struct ExchangeOracles {
  virtual ~ExchangeOracles() = default;
  virtual int ground_size() const = 0;
  virtual std::int64_t benefit(int e) const = 0;
  virtual void set_current(const std::vector<char>& in_set) = 0;
  // e outside the current set I:
  virtual bool m1_can_add(int e) = 0;
  virtual bool m2_can_add(int e) = 0;
  // z inside I, e outside: I - z + e keeps the first matroid independent
  virtual bool m1_exchange(int z, int e) = 0;
  // e outside I with m2_can_add(e) false: all z in I with I - z + e
  // independent in the second matroid
  virtual std::vector<int> m2_circuit(int e) = 0;
};

/// Builds a maximum-cardinality set independent in both matroids with
/// maximum total benefit, via successive shortest augmenting paths
/// (path cost, then hop count, then position order). Deterministic.
std::vector<char> max_benefit_common_independent(ExchangeOracles& oracles);

}  // namespace obsnet
