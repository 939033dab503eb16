#include "obsnet/realization.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace obsnet {

using ordered_json = nlohmann::ordered_json;

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  auto mulmod = [&](std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
  };
  // bases 2,3,5,7 are exact for every n < 3215031751, covering p < 2^31
  for (std::uint64_t base : {2ULL, 3ULL, 5ULL, 7ULL}) {
    std::uint64_t x = 1, e = d, acc = base % n;
    while (e) {
      if (e & 1) x = mulmod(x, acc);
      acc = mulmod(acc, acc);
      e >>= 1;
    }
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < r && witness; ++i) {
      x = mulmod(x, x);
      if (x == n - 1) witness = false;
    }
    if (witness) return false;
  }
  return true;
}

std::uint32_t smallest_prime_at_least(std::uint32_t n) {
  std::uint64_t c = std::max<std::uint32_t>(n, 2);
  while (!is_prime(c)) ++c;
  if (c >= (std::uint64_t(1) << 31)) fail(errc::validation, "no admissible prime below 2^31");
  return static_cast<std::uint32_t>(c);
}

PrimeField::PrimeField(std::uint64_t p) {
  if (p < 2 || p >= (std::uint64_t(1) << 31))
    fail(errc::validation, "field modulus must lie in [2, 2^31)");
  if (!is_prime(p)) fail(errc::validation, "field modulus " + std::to_string(p) + " is not prime");
  p_ = static_cast<std::uint32_t>(p);
}

std::uint32_t PrimeField::add(std::uint32_t a, std::uint32_t b) const {
  std::uint64_t s = std::uint64_t(a) + b;
  return static_cast<std::uint32_t>(s >= p_ ? s - p_ : s);
}

std::uint32_t PrimeField::sub(std::uint32_t a, std::uint32_t b) const {
  return a >= b ? a - b : a + p_ - b;
}

std::uint32_t PrimeField::mul(std::uint32_t a, std::uint32_t b) const {
  return static_cast<std::uint32_t>(std::uint64_t(a) * b % p_);
}

std::uint32_t PrimeField::pow(std::uint32_t a, std::uint64_t e) const {
  std::uint32_t acc = a % p_, out = 1;
  while (e) {
    if (e & 1) out = mul(out, acc);
    acc = mul(acc, acc);
    e >>= 1;
  }
  return out;
}

std::uint32_t PrimeField::inv(std::uint32_t a) const {
  if (a % p_ == 0) fail(errc::internal, "inverse of zero");
  return pow(a, p_ - 2);
}

namespace {

void check_dimensions(const FieldSystem& sys) {
  int n = sys.structure.n_states, m = sys.structure.n_outputs();
  if (static_cast<int>(sys.a.size()) != n) fail(errc::validation, "a must be N x N");
  for (const auto& row : sys.a)
    if (static_cast<int>(row.size()) != n) fail(errc::validation, "a must be N x N");
  if (static_cast<int>(sys.c.size()) != m) fail(errc::validation, "c must be M x N");
  for (const auto& row : sys.c)
    if (static_cast<int>(row.size()) != n) fail(errc::validation, "c must be M x N");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (sys.a[i][j] && !sys.structure.a_pattern[i][j])
        fail(errc::validation, "a has a nonzero outside the structure");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      if (sys.c[i][j] && !sys.structure.c_pattern[i][j])
        fail(errc::validation, "c has a nonzero outside the structure");
}

FieldMatrix mat_mul(const PrimeField& f, const FieldMatrix& x, const FieldMatrix& y) {
  int rows = static_cast<int>(x.size());
  int inner = static_cast<int>(y.size());
  int cols = inner ? static_cast<int>(y[0].size()) : 0;
  FieldMatrix out(rows, FieldVector(cols, 0));
  for (int i = 0; i < rows; ++i)
    for (int t = 0; t < inner; ++t) {
      if (!x[i][t]) continue;
      for (int j = 0; j < cols; ++j)
        out[i][j] = f.add(out[i][j], f.mul(x[i][t], y[t][j]));
    }
  return out;
}

FieldMatrix stacked_observability(const FieldSystem& sys, int horizon) {
  FieldMatrix rows;
  FieldMatrix cur = sys.c;
  for (int t = 0; t < horizon; ++t) {
    for (const auto& r : cur) rows.push_back(r);
    if (t + 1 < horizon) cur = mat_mul(sys.field, cur, sys.a);
  }
  return rows;
}

int eliminate(const PrimeField& f, FieldMatrix& m, FieldVector* rhs) {
  int rows = static_cast<int>(m.size());
  int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r)
      if (m[r][col]) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    if (rhs) std::swap((*rhs)[rank], (*rhs)[pivot]);
    std::uint32_t scale = f.inv(m[rank][col]);
    for (int j = col; j < cols; ++j) m[rank][j] = f.mul(m[rank][j], scale);
    if (rhs) (*rhs)[rank] = f.mul((*rhs)[rank], scale);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || !m[r][col]) continue;
      std::uint32_t factor = m[r][col];
      for (int j = col; j < cols; ++j) m[r][j] = f.sub(m[r][j], f.mul(factor, m[rank][j]));
      if (rhs) (*rhs)[r] = f.sub((*rhs)[r], f.mul(factor, (*rhs)[rank]));
    }
    ++rank;
  }
  return rank;
}

}  // namespace

FieldSystem instantiate_deterministic(const StructuralPair& s, const PrimeField& field) {
  validate_structural_pair(s);
  int n = s.n_states, m = s.n_outputs();
  if (field.p() < static_cast<std::uint32_t>(n))
    fail(errc::validation, "field modulus smaller than the state count");

  // Shape gate: each sensor has exactly one outgoing link or output beyond
  // its self-loop, and the links form no cycle.
  std::vector<int> succ(n, -1);
  std::vector<int> out_count(n, 0);
  for (int i = 0; i < n; ++i) {
    if (!s.a_pattern[i][i]) fail(errc::validation, "structure lacks a self-loop on state " +
                                                       std::to_string(i + 1));
    for (int j = 0; j < n; ++j)
      if (i != j && s.a_pattern[i][j]) {
        ++out_count[j];
        succ[j] = i;
      }
  }
  for (int r = 0; r < m; ++r)
    for (int j = 0; j < n; ++j)
      if (s.c_pattern[r][j]) {
        ++out_count[j];
      }
  for (int j = 0; j < n; ++j)
    if (out_count[j] != 1)
      fail(errc::validation, "structure is not a branching with self-loops");
  for (int start = 0; start < n; ++start) {
    int hops = 0;
    for (int v = succ[start]; v >= 0; v = succ[v])
      if (++hops > n) fail(errc::validation, "structure is not a branching with self-loops");
  }

  FieldSystem sys{field, FieldMatrix(n, FieldVector(n, 0)), FieldMatrix(m, FieldVector(n, 0)), s};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (s.a_pattern[i][j]) sys.a[i][j] = i == j ? (i + 1) % field.p() : 1;
  for (int r = 0; r < m; ++r)
    for (int j = 0; j < n; ++j)
      if (s.c_pattern[r][j]) sys.c[r][j] = 1;
  return sys;
}

FieldSystem instantiate_random(const StructuralPair& s, const PrimeField& field,
                               std::uint64_t seed, int max_retries) {
  validate_structural_pair(s);
  if (max_retries < 1) fail(errc::validation, "retry budget must be >= 1");
  if (!is_structurally_observable(s))
    fail(errc::validation, "pattern is structurally unobservable");
  int n = s.n_states, m = s.n_outputs();
  rng gen(seed);
  for (int trial = 0; trial < max_retries; ++trial) {
    FieldSystem sys{field, FieldMatrix(n, FieldVector(n, 0)), FieldMatrix(m, FieldVector(n, 0)),
                    s};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (s.a_pattern[i][j])
          sys.a[i][j] = static_cast<std::uint32_t>(1 + gen.next_below(field.p() - 1));
    for (int r = 0; r < m; ++r)
      for (int j = 0; j < n; ++j)
        if (s.c_pattern[r][j])
          sys.c[r][j] = static_cast<std::uint32_t>(1 + gen.next_below(field.p() - 1));
    if (observability_rank(sys, n) == n) return sys;
  }
  fail(errc::validation, "random instantiation stayed rank deficient after " +
                             std::to_string(max_retries) + " trials");
}

int observability_rank(const FieldSystem& sys, int horizon) {
  check_dimensions(sys);
  if (horizon < 1) fail(errc::validation, "horizon must be >= 1");
  FieldMatrix m = stacked_observability(sys, horizon);
  return eliminate(sys.field, m, nullptr);
}

FieldMatrix simulate(const FieldSystem& sys, const FieldVector& x0, int steps) {
  check_dimensions(sys);
  if (static_cast<int>(x0.size()) != sys.n_states())
    fail(errc::validation, "initial state length disagrees with the system");
  for (std::uint32_t v : x0)
    if (v >= sys.field.p()) fail(errc::validation, "initial state entry outside the field");
  if (steps < 0) fail(errc::validation, "step count must be >= 0");

  FieldMatrix trace;
  FieldVector x = x0;
  for (int t = 0; t < steps; ++t) {
    FieldVector y(sys.n_outputs(), 0);
    for (int r = 0; r < sys.n_outputs(); ++r)
      for (int j = 0; j < sys.n_states(); ++j)
        y[r] = sys.field.add(y[r], sys.field.mul(sys.c[r][j], x[j]));
    trace.push_back(std::move(y));
    FieldVector nx(sys.n_states(), 0);
    for (int i = 0; i < sys.n_states(); ++i)
      for (int j = 0; j < sys.n_states(); ++j)
        nx[i] = sys.field.add(nx[i], sys.field.mul(sys.a[i][j], x[j]));
    x = std::move(nx);
  }
  return trace;
}

RecoverResult recover_initial_state(const FieldSystem& sys, const FieldMatrix& trace) {
  check_dimensions(sys);
  int m = sys.n_outputs(), n = sys.n_states();
  int steps = static_cast<int>(trace.size());
  if (steps < 1) fail(errc::validation, "trace must contain at least one step");
  for (const auto& row : trace) {
    if (static_cast<int>(row.size()) != m)
      fail(errc::validation, "trace row width disagrees with the output count");
    for (std::uint32_t v : row)
      if (v >= sys.field.p()) fail(errc::validation, "trace entry outside the field");
  }

  FieldMatrix obs = stacked_observability(sys, steps);
  FieldVector rhs;
  for (const auto& row : trace)
    for (std::uint32_t v : row) rhs.push_back(v);

  int rank = eliminate(sys.field, obs, &rhs);
  if (rank < n) return RecoverResult{false, {}};

  // reduced row-echelon form with full column rank: solution sits in the
  // first n rows; all later rows must have zeroed out
  RecoverResult out;
  out.observable = true;
  out.x0.assign(n, 0);
  for (int r = 0; r < rank; ++r) {
    int lead = -1;
    for (int j = 0; j < n; ++j)
      if (obs[r][j]) {
        lead = j;
        break;
      }
    if (lead >= 0) out.x0[lead] = rhs[r];
  }
  for (int r = rank; r < static_cast<int>(obs.size()); ++r)
    if (rhs[r] != 0) fail(errc::validation, "inconsistent trace");
  return out;
}

std::string system_to_json(const FieldSystem& sys) {
  ordered_json doc;
  doc["p"] = sys.field.p();
  doc["a"] = sys.a;
  doc["c"] = sys.c;
  ordered_json ref;
  ref["a_pattern"] = sys.structure.a_pattern;
  ref["c_pattern"] = sys.structure.c_pattern;
  doc["structure_ref"] = ref;
  return doc.dump(2) + "\n";
}

FieldSystem system_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const std::exception& e) {
    fail(errc::io_format, std::string("malformed system document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("p") || !doc.contains("a") || !doc.contains("c"))
    fail(errc::io_format, "system document needs p, a, c");

  auto read_matrix = [&](const ordered_json& jm, std::uint32_t p, const char* what) {
    FieldMatrix rows;
    if (!jm.is_array()) fail(errc::io_format, std::string(what) + " must be a matrix");
    for (const auto& jr : jm) {
      if (!jr.is_array()) fail(errc::io_format, std::string(what) + " must be a matrix");
      FieldVector row;
      for (const auto& v : jr) {
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
            v.get<std::int64_t>() >= static_cast<std::int64_t>(p))
          fail(errc::io_format, std::string(what) + " entries must lie in [0, p)");
        row.push_back(static_cast<std::uint32_t>(v.get<std::int64_t>()));
      }
      rows.push_back(std::move(row));
    }
    return rows;
  };

  if (!doc["p"].is_number_integer() || doc["p"].get<std::int64_t>() < 2)
    fail(errc::io_format, "p must be an integer >= 2");
  PrimeField field(static_cast<std::uint64_t>(doc["p"].get<std::int64_t>()));
  FieldMatrix a = read_matrix(doc["a"], field.p(), "a");
  FieldMatrix c = read_matrix(doc["c"], field.p(), "c");

  StructuralPair s;
  if (doc.contains("structure_ref") && doc["structure_ref"].is_object() &&
      doc["structure_ref"].contains("a_pattern")) {
    const auto& ref = doc["structure_ref"];
    auto read_pattern = [](const ordered_json& jm) {
      std::vector<std::vector<std::uint8_t>> rows;
      for (const auto& jr : jm) {
        std::vector<std::uint8_t> row;
        for (const auto& v : jr) row.push_back(v.get<int>() ? 1 : 0);
        rows.push_back(std::move(row));
      }
      return rows;
    };
    try {
      s = make_structural_pair(read_pattern(ref["a_pattern"]), read_pattern(ref["c_pattern"]));
    } catch (const error& e) {
      fail(errc::io_format, e.what());
    }
  } else {
    // fall back to the support of the numeric matrices
    std::vector<std::vector<std::uint8_t>> ap, cp;
    for (const auto& row : a) {
      std::vector<std::uint8_t> r;
      for (std::uint32_t v : row) r.push_back(v ? 1 : 0);
      ap.push_back(std::move(r));
    }
    for (const auto& row : c) {
      std::vector<std::uint8_t> r;
      for (std::uint32_t v : row) r.push_back(v ? 1 : 0);
      cp.push_back(std::move(r));
    }
    try {
      s = make_structural_pair(std::move(ap), std::move(cp));
    } catch (const error& e) {
      fail(errc::io_format, e.what());
    }
  }

  FieldSystem sys{field, std::move(a), std::move(c), std::move(s)};
  try {
    check_dimensions(sys);
  } catch (const error& e) {
    fail(errc::io_format, e.what());
  }
  return sys;
}

std::string trace_to_csv(const FieldMatrix& trace) {
  std::ostringstream out;
  int m = trace.empty() ? 0 : static_cast<int>(trace[0].size());
  out << "n";
  for (int r = 1; r <= m; ++r) out << ",y_" << r;
  out << "\n";
  for (std::size_t t = 0; t < trace.size(); ++t) {
    out << t;
    for (std::uint32_t v : trace[t]) out << "," << v;
    out << "\n";
  }
  return out.str();
}

FieldMatrix trace_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto chomp = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };
  if (!std::getline(in, line)) fail(errc::io_format, "empty trace file");
  chomp(line);
  if (line.rfind("n", 0) != 0) fail(errc::io_format, "trace header must start with n");
  int m = 0;
  for (char ch : line)
    if (ch == ',') ++m;

  FieldMatrix trace;
  int expected = 0;
  while (std::getline(in, line)) {
    chomp(line);
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<std::uint32_t> values;
    bool first = true;
    while (std::getline(row, cell, ',')) {
      std::size_t used = 0;
      long long v = 0;
      try {
        v = std::stoll(cell, &used);
      } catch (const std::exception&) {
        fail(errc::io_format, "trace cell is not an integer: " + cell);
      }
      if (used != cell.size() || v < 0) fail(errc::io_format, "trace cell is not an integer: " + cell);
      if (first) {
        if (v != expected) fail(errc::io_format, "trace steps must be consecutive from 0");
        first = false;
      } else {
        values.push_back(static_cast<std::uint32_t>(v));
      }
    }
    if (static_cast<int>(values.size()) != m)
      fail(errc::io_format, "trace row width disagrees with the header");
    trace.push_back(std::move(values));
    ++expected;
  }
  return trace;
}

}  // namespace obsnet
