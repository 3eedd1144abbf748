#include "bellviol/bell_ops.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bellviol/errors.hpp"

namespace bellviol {

namespace {

constexpr int kMaxQubits = 12;

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::vector<ProductTerm> chsh_terms(int n, int q1, int q2) {
  auto term = [&](double c, Factor f1, Factor f2) {
    ProductTerm t{c, std::vector<Factor>(static_cast<std::size_t>(n), Factor::identity)};
    t.factors[static_cast<std::size_t>(q1)] = f1;
    t.factors[static_cast<std::size_t>(q2)] = f2;
    return t;
  };
  return {term(0.5, Factor::a, Factor::a), term(0.5, Factor::a_prime, Factor::a),
          term(0.5, Factor::a, Factor::a_prime), term(-0.5, Factor::a_prime, Factor::a_prime)};
}

// inner (x) (A_q + A'_q)/2 + I (x) (A_q - A'_q)/2
std::vector<ProductTerm> extend(const std::vector<ProductTerm>& inner, int n, int q) {
  std::vector<ProductTerm> out;
  out.reserve(2 * inner.size() + 2);
  const auto slot = static_cast<std::size_t>(q);
  for (const auto& t : inner) {
    for (Factor f : {Factor::a, Factor::a_prime}) {
      ProductTerm u = t;
      u.coeff *= 0.5;
      u.factors[slot] = f;
      out.push_back(std::move(u));
    }
  }
  for (auto [c, f] : {std::pair{0.5, Factor::a}, std::pair{-0.5, Factor::a_prime}}) {
    ProductTerm u{c, std::vector<Factor>(static_cast<std::size_t>(n), Factor::identity)};
    u.factors[slot] = f;
    out.push_back(std::move(u));
  }
  return out;
}

// WWZB expansion with S(s) = sqrt(2) cos((s_1 + ... + s_m - m + 1) pi/4),
// placed on qubits 0..m-1 of an n-qubit register. A_j carries exponent 0
// and A'_j exponent 1 on s_j, which makes m = 2 coincide with CHSH.
std::vector<ProductTerm> mabk_terms(int m, int n) {
  const std::size_t combos = std::size_t{1} << m;
  std::vector<double> S(combos);
  for (std::size_t sbits = 0; sbits < combos; ++sbits) {
    int sum = 0;
    for (int j = 0; j < m; ++j) sum += ((sbits >> j) & 1U) ? -1 : 1;
    S[sbits] = std::numbers::sqrt2 * std::cos((sum - m + 1) * std::numbers::pi / 4.0);
  }
  std::vector<ProductTerm> out;
  for (std::size_t kbits = 0; kbits < combos; ++kbits) {
    // bit j of kbits set: qubit j measures A'_j.
    double c = 0.0;
    for (std::size_t sbits = 0; sbits < combos; ++sbits) {
      const bool negative = std::popcount(kbits & sbits) & 1;
      c += negative ? -S[sbits] : S[sbits];
    }
    c /= static_cast<double>(combos);
    if (std::abs(c) < 1e-14) continue;
    ProductTerm t{c, std::vector<Factor>(static_cast<std::size_t>(n), Factor::identity)};
    for (int j = 0; j < m; ++j)
      t.factors[static_cast<std::size_t>(j)] = ((kbits >> j) & 1U) ? Factor::a_prime : Factor::a;
    out.push_back(std::move(t));
  }
  return out;
}

std::string kind_name(OperatorKind k) {
  switch (k) {
    case OperatorKind::chsh: return "chsh";
    case OperatorKind::recursive: return "recursive";
    case OperatorKind::mabk: return "mabk";
    case OperatorKind::chen: return "chen";
  }
  return "?";
}

}  // namespace

void MeasurementSettings::check() const {
  require(a.size() == a_prime.size(), "MeasurementSettings: a and a' differ in length");
  for (std::size_t q = 0; q < a.size(); ++q) {
    require(std::abs(norm(a[q]) - 1.0) <= 1e-12, "MeasurementSettings: a_" + std::to_string(q + 1) + " is not unit");
    require(std::abs(norm(a_prime[q]) - 1.0) <= 1e-12,
            "MeasurementSettings: a'_" + std::to_string(q + 1) + " is not unit");
  }
}

MeasurementSettings MeasurementSettings::uniform(int n, const RealVec3& a, const RealVec3& a_prime) {
  return {std::vector<RealVec3>(static_cast<std::size_t>(n), a),
          std::vector<RealVec3>(static_cast<std::size_t>(n), a_prime)};
}

long family_size(int n) {
  require(n >= 2 && n <= kMaxQubits + 8, "family_size: n out of range");
  long f = 1;
  for (int i = 3; i <= n; ++i) f *= i;
  return f;
}

BellOperatorSpec BellOperatorSpec::chsh() { return {OperatorKind::chsh, 2, 0, {}}; }

BellOperatorSpec BellOperatorSpec::recursive(int n, long k) {
  require(n >= 3 && n <= kMaxQubits, "recursive operator needs 3 <= N <= 12");
  return {OperatorKind::recursive, n, k, index_to_perm(n, k)};
}

BellOperatorSpec BellOperatorSpec::mabk(int n) {
  require(n >= 2 && n <= kMaxQubits, "MABK operator needs 2 <= N <= 12");
  return {OperatorKind::mabk, n, 0, {}};
}

BellOperatorSpec BellOperatorSpec::chen(int n) {
  require(n >= 3 && n <= kMaxQubits, "Chen operator needs 3 <= N <= 12");
  return {OperatorKind::chen, n, 0, {}};
}

BellOperatorSpec BellOperatorSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  long n = -1, k = -1;
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    std::size_t pos = colon + 1;
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos)
        throw ParseError("operator spec: expected key=value at position " + std::to_string(pos));
      const std::string_view key = item.substr(0, eq);
      const std::string value(item.substr(eq + 1));
      long v = 0;
      std::size_t used = 0;
      try {
        v = std::stol(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != value.size())
        throw ParseError("operator spec: non-integer value at position " + std::to_string(pos + eq + 1));
      if (key == "N" || key == "n") {
        n = v;
      } else if (key == "k") {
        k = v;
      } else {
        throw ParseError("operator spec: unknown key '" + std::string(key) + "' at position " + std::to_string(pos));
      }
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
      pos += comma + 1;
    }
  }
  try {
    if (head == "chsh") {
      if (n != -1 && n != 2) throw ParseError("operator spec: chsh is a two-qubit operator");
      if (k != -1) throw ParseError("operator spec: chsh takes no k");
      return chsh();
    }
    if (head == "recursive") {
      if (n == -1 || k == -1) throw ParseError("operator spec: recursive needs N and k");
      return recursive(static_cast<int>(n), k);
    }
    if (head == "mabk" || head == "chen") {
      if (n == -1) throw ParseError("operator spec: " + std::string(head) + " needs N");
      if (k != -1) throw ParseError("operator spec: " + std::string(head) + " takes no k");
      return head == "mabk" ? mabk(static_cast<int>(n)) : chen(static_cast<int>(n));
    }
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("operator spec: ") + e.what());
  }
  throw ParseError("operator spec: unknown operator '" + std::string(head) + "' at position 0");
}

std::string BellOperatorSpec::to_string() const {
  switch (kind) {
    case OperatorKind::chsh: return "chsh";
    case OperatorKind::recursive: return "recursive:N=" + std::to_string(n_qubits) + ",k=" + std::to_string(index);
    default: return kind_name(kind) + ":N=" + std::to_string(n_qubits);
  }
}

QubitPerm index_to_perm(int n, long k) {
  require(n >= 2 && n <= kMaxQubits, "index_to_perm: n out of range");
  require(k >= 1 && k <= family_size(n), "index_to_perm: k must lie in 1..n!/2");
  if (n == 2) return {0, 1};
  const long block = family_size(n - 1);
  const int last = static_cast<int>((k - 1) / block);
  const long inner_k = (k - 1) % block + 1;
  std::vector<int> remaining;
  for (int q = 0; q < n; ++q)
    if (q != last) remaining.push_back(q);
  const QubitPerm inner = index_to_perm(n - 1, inner_k);
  QubitPerm perm;
  perm.reserve(static_cast<std::size_t>(n));
  for (int r : inner) perm.push_back(remaining[static_cast<std::size_t>(r)]);
  perm.push_back(last);
  return perm;
}

long perm_to_index(const QubitPerm& perm) {
  const int n = static_cast<int>(perm.size());
  require(n >= 2 && n <= kMaxQubits, "perm_to_index: length out of range");
  std::vector<int> sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  for (int q = 0; q < n; ++q) require(sorted[static_cast<std::size_t>(q)] == q, "perm_to_index: not a permutation");
  if (n == 2) return 1;
  const int last = perm.back();
  std::vector<int> remaining;
  for (int q = 0; q < n; ++q)
    if (q != last) remaining.push_back(q);
  QubitPerm inner;
  for (int r = 0; r < n - 1; ++r) {
    const auto it = std::find(remaining.begin(), remaining.end(), perm[static_cast<std::size_t>(r)]);
    inner.push_back(static_cast<int>(it - remaining.begin()));
  }
  return static_cast<long>(last) * family_size(n - 1) + perm_to_index(inner);
}

std::vector<ProductTerm> operator_terms(const BellOperatorSpec& spec) {
  const int n = spec.n_qubits;
  switch (spec.kind) {
    case OperatorKind::chsh:
      return chsh_terms(2, 0, 1);
    case OperatorKind::recursive: {
      require(static_cast<int>(spec.perm.size()) == n, "recursive operator spec has no permutation");
      auto terms = chsh_terms(n, spec.perm[0], spec.perm[1]);
      for (int m = 2; m < n; ++m) terms = extend(terms, n, spec.perm[static_cast<std::size_t>(m)]);
      return terms;
    }
    case OperatorKind::mabk:
      return mabk_terms(n, n);
    case OperatorKind::chen:
      return extend(mabk_terms(n - 1, n), n, n - 1);
  }
  return {};
}

ComplexMatrix terms_matrix(const std::vector<ProductTerm>& terms, const MeasurementSettings& s) {
  const int n = s.n_qubits();
  std::vector<std::array<ComplexMatrix, 3>> local(static_cast<std::size_t>(n));
  for (std::size_t q = 0; q < local.size(); ++q)
    local[q] = {ComplexMatrix::identity(2), dot_sigma(s.a[q]), dot_sigma(s.a_prime[q])};
  const std::size_t d = std::size_t{1} << n;
  ComplexMatrix out(d, d);
  for (const auto& t : terms) {
    require(static_cast<int>(t.factors.size()) == n, "terms_matrix: settings do not match operator size");
    ComplexMatrix p = local[0][static_cast<std::size_t>(t.factors[0])];
    for (std::size_t q = 1; q < local.size(); ++q) p = kron(p, local[q][static_cast<std::size_t>(t.factors[q])]);
    out += p * Complex(t.coeff);
  }
  return out;
}

ComplexMatrix chsh_matrix(const MeasurementSettings& s) {
  if (s.n_qubits() != 2) throw std::invalid_argument("chsh_matrix: settings must cover 2 qubits");
  return terms_matrix(chsh_terms(2, 0, 1), s);
}

ComplexMatrix recursive_bell_matrix(const BellOperatorSpec& spec, const MeasurementSettings& s) {
  require(spec.kind == OperatorKind::recursive, "recursive_bell_matrix: spec is not recursive");
  require(s.n_qubits() == spec.n_qubits, "recursive_bell_matrix: settings do not match N");
  return terms_matrix(operator_terms(spec), s);
}

ComplexMatrix mabk_matrix(const MeasurementSettings& s) {
  require(s.n_qubits() >= 2, "mabk_matrix: need at least 2 qubits");
  return terms_matrix(mabk_terms(s.n_qubits(), s.n_qubits()), s);
}

ComplexMatrix chen_matrix(const MeasurementSettings& s) {
  require(s.n_qubits() >= 3, "chen_matrix: need at least 3 qubits");
  return terms_matrix(operator_terms(BellOperatorSpec::chen(s.n_qubits())), s);
}

ComplexMatrix operator_matrix(const BellOperatorSpec& spec, const MeasurementSettings& s) {
  require(s.n_qubits() == spec.n_qubits, "operator_matrix: settings do not match N");
  return terms_matrix(operator_terms(spec), s);
}

int classical_value(const BellOperatorSpec& spec, const std::vector<int>& x, const std::vector<int>& xp) {
  require(static_cast<int>(x.size()) == spec.n_qubits && x.size() == xp.size(),
          "classical_value: outcome vectors do not match N");
  auto at = [](const std::vector<int>& v, int q) { return v[static_cast<std::size_t>(q)]; };
  int q1 = 0, q2 = 1;
  if (spec.kind == OperatorKind::recursive) {
    q1 = spec.perm[0];
    q2 = spec.perm[1];
  } else {
    require(spec.kind == OperatorKind::chsh, "classical_value: only CHSH and recursive operators");
  }
  // Every term of the CHSH sum is +-1 and exactly one sign pattern cancels,
  // so the halved sum is an integer.
  int value = (at(x, q1) * at(x, q2) + at(xp, q1) * at(x, q2) + at(x, q1) * at(xp, q2) - at(xp, q1) * at(xp, q2)) / 2;
  for (int m = 2; m < spec.n_qubits; ++m) {
    const int q = spec.perm[static_cast<std::size_t>(m)];
    const int plus = (at(x, q) + at(xp, q)) / 2;
    const int minus = (at(x, q) - at(xp, q)) / 2;
    value = value * plus + minus;
  }
  return value;
}

ClassicalRange classical_range(const BellOperatorSpec& spec) {
  const int n = spec.n_qubits;
  require(n <= 8, "classical_range: enumeration limited to N <= 8");
  ClassicalRange range{INT32_MAX, INT32_MIN, 0};
  const std::uint64_t total = std::uint64_t{1} << (2 * n);
  std::vector<int> x(static_cast<std::size_t>(n)), xp(static_cast<std::size_t>(n));
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    for (int q = 0; q < n; ++q) {
      x[static_cast<std::size_t>(q)] = ((bits >> (2 * q)) & 1U) ? -1 : 1;
      xp[static_cast<std::size_t>(q)] = ((bits >> (2 * q + 1)) & 1U) ? -1 : 1;
    }
    const int v = classical_value(spec, x, xp);
    range.min = std::min(range.min, v);
    range.max = std::max(range.max, v);
    ++range.assignments;
  }
  return range;
}

}  // namespace bellviol
