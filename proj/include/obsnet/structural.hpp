#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "obsnet/common.hpp"

namespace obsnet {

/// Zero/nonzero patterns of the structural dynamics pair. Row r of c_pattern
/// corresponds to output r; a nonzero entry may appear only in the column of
/// that output's source sensor.
struct StructuralPair {
  int n_states = 0;                                  // N = |X|
  std::vector<std::vector<std::uint8_t>> a_pattern;  // N x N
  std::vector<std::vector<std::uint8_t>> c_pattern;  // M x N
  // Per output row: (sensor column, backbone index, physical edge id of the
  // originating sensor->backbone link). Backbone/edge provenance is absent
  // (-1) for pairs built from raw matrices.
  struct OutputRef {
    int sensor = -1;
    int backbone = -1;
    int physical_edge_id = -1;
  };
  std::vector<OutputRef> output_index;

  int n_outputs() const { return static_cast<int>(c_pattern.size()); }
};

StructuralPair make_structural_pair(std::vector<std::vector<std::uint8_t>> a_pattern,
                                    std::vector<std::vector<std::uint8_t>> c_pattern);

/// Validates shapes and the one-nonzero-per-row rule for c_pattern.
void validate_structural_pair(const StructuralPair& s);

/// Two-condition test: every state reaches an output in the directed graph
/// of (a_pattern, c_pattern), and the column-to-row bipartite graph has a
/// matching saturating all state columns.
bool is_structurally_observable(const StructuralPair& s);

struct RobustnessCheck {
  bool ok = false;
  std::vector<int> counterexample;  // lexicographically smallest failing U
};

/// Deletes every sensor subset U with |U| <= k (rows/columns removed, C~
/// rows of deleted sensors zeroed) and re-tests observability.
RobustnessCheck robust_structural_observability(const StructuralPair& s, int k);

struct CactusStem {
  std::vector<int> states;  // states[0] -> states[1] -> ... -> output
  int output_row = -1;
};

struct CactusCycle {
  std::vector<int> states;  // cyclic order; single state means a self-loop
  int attach_from = -1;     // state inside the cycle
  bool attach_to_output = false;
  int attach_to = -1;       // state index, or output row when attach_to_output
};

struct CactusCertificate {
  std::vector<CactusStem> stems;
  std::vector<CactusCycle> cycles;  // listed in attachment order
  std::vector<int> uncovered;
};

/// Builds a spanning certificate for observable pairs shaped like the design
/// pipeline's results (branching into outputs plus self-loops); states that
/// cannot be placed under the recursive rules are reported uncovered.
CactusCertificate extract_cactus_certificate(const StructuralPair& s);

/// Checks a certificate against the recursive cactus-patch rules: edges
/// exist, stems end at distinct outputs, states appear once, every cycle
/// attaches to an already-built part of its cactus.
bool validate_certificate(const StructuralPair& s, const CactusCertificate& cert);

std::string certificate_to_json(const CactusCertificate& cert);

}  // namespace obsnet
