#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "obsnet/structural.hpp"

namespace obsnet {

/// Prime modulus in [2, 2^31); primality verified at construction with a
/// deterministic Miller-Rabin check.
class PrimeField {
 public:
  explicit PrimeField(std::uint64_t p);
  std::uint32_t p() const { return p_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
  std::uint32_t inv(std::uint32_t a) const;

 private:
  std::uint32_t p_ = 2;
};

bool is_prime(std::uint64_t n);
std::uint32_t smallest_prime_at_least(std::uint32_t n);

using FieldMatrix = std::vector<std::vector<std::uint32_t>>;
using FieldVector = std::vector<std::uint32_t>;

struct FieldSystem {
  PrimeField field;
  FieldMatrix a;  // N x N
  FieldMatrix c;  // M x N
  StructuralPair structure;

  int n_states() const { return structure.n_states; }
  int n_outputs() const { return structure.n_outputs(); }
};

/// Self-loops get the distinct values 1..N in sensor order, every other
/// structural nonzero gets 1. Only accepts the shape the k = 0 pipeline
/// emits: exactly one outgoing link or output per sensor, acyclic apart
/// from self-loops.
FieldSystem instantiate_deterministic(const StructuralPair& s, const PrimeField& field);

/// Draws structural nonzeros uniformly from {1..p-1}, redrawing until the
/// observability matrix reaches full rank or the retry budget runs out.
FieldSystem instantiate_random(const StructuralPair& s, const PrimeField& field,
                               std::uint64_t seed, int max_retries = 16);

/// Exact rank of [C; CA; ...; CA^(horizon-1)] over GF(p).
int observability_rank(const FieldSystem& sys, int horizon);

/// Output rows y(0..steps-1) with y(n) = C A^n x0.
FieldMatrix simulate(const FieldSystem& sys, const FieldVector& x0, int steps);

struct RecoverResult {
  bool observable = false;
  FieldVector x0;  // meaningful only when observable
};

/// Solves y = O x(0) exactly; reports unobservable when the stacked matrix
/// is rank deficient, errors when the trace matches no initial state.
RecoverResult recover_initial_state(const FieldSystem& sys, const FieldMatrix& trace);

std::string system_to_json(const FieldSystem& sys);
FieldSystem system_from_json(const std::string& text);
std::string trace_to_csv(const FieldMatrix& trace);
FieldMatrix trace_from_csv(const std::string& text);

}  // namespace obsnet
