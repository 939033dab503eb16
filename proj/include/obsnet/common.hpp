#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace obsnet {

/// Error categories, mapped to CLI exit codes by the front end.
enum class errc {
  infeasible,  // exit 2: no solution exists for the requested parameters
  validation,  // exit 3: input violates a documented precondition
  io_format,   // exit 4: malformed document or unreadable file
  internal,    // never expected; indicates a broken invariant
};

class error : public std::runtime_error {
 public:
  error(errc kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  errc kind() const { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& message) {
  throw error(kind, message);
}

/// Exact edge cost in micro-units (1 input unit == 10^6 micro-units).
/// Plain integer arithmetic keeps optimizer comparisons deterministic.
struct Cost {
  std::int64_t micro = 0;

  friend Cost operator+(Cost a, Cost b) { return Cost{a.micro + b.micro}; }
  Cost& operator+=(Cost b) {
    micro += b.micro;
    return *this;
  }
  friend bool operator==(Cost a, Cost b) { return a.micro == b.micro; }
  friend bool operator!=(Cost a, Cost b) { return a.micro != b.micro; }
  friend bool operator<(Cost a, Cost b) { return a.micro < b.micro; }
  friend bool operator<=(Cost a, Cost b) { return a.micro <= b.micro; }
  friend bool operator>(Cost a, Cost b) { return a.micro > b.micro; }
  friend bool operator>=(Cost a, Cost b) { return a.micro >= b.micro; }
};

/// Render a cost in input units ("3", "0.25", "1.000001"); trailing zeros
/// of the fractional part are trimmed so output is canonical.
std::string cost_to_string(Cost c);

/// Parse a non-negative decimal with round-half-up at the 6th fractional
/// digit. Accepts plain integers, "1.5", "0.0000004" (rounds to 0).
Cost cost_from_string(const std::string& text);

/// Convert a non-negative double in input units (round-half-up at 10^-6).
Cost cost_from_double(double units);

// --- deterministic randomness helpers -------------------------------------
//
// All stochastic behaviour in the library flows through these so results are
// reproducible bit-for-bit across platforms; standard distributions are
// implementation-defined and therefore avoided.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Mix a master seed with stream indices into an independent child seed.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a,
                              std::uint64_t b = 0x5bf03635d4f04910ULL) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s ^= a * 0xff51afd7ed558ccdULL + h;
  h = splitmix64(s);
  s ^= b * 0xc4ceb9fe1a85ec53ULL + h;
  return splitmix64(s);
}

/// Small deterministic generator (xorshift-star seeded via splitmix64).
class rng {
 public:
  explicit rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    state_ = splitmix64(s);
    if (state_ == 0) state_ = 0x2545f4914f6cdd1dULL;
  }

  std::uint64_t next_u64() {
    std::uint64_t x = state_;
    x ^= x >> 12;
    x ^= x << 25;
    x ^= x >> 27;
    state_ = x;
    return x * 0x2545f4914f6cdd1dULL;
  }

  /// Uniform in [0, bound) without modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) fail(errc::internal, "next_below: zero bound");
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace obsnet
