#include "bellviol/states.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "bellviol/errors.hpp"

namespace bellviol {

namespace {

int qubits_for_dim(std::size_t dim) {
  if (dim < 2 || !std::has_single_bit(dim))
    throw std::invalid_argument("DensityMatrix: dimension must be a power of two >= 2");
  return std::countr_zero(dim);
}

void require_qubits(int n, int min, const char* who) {
  if (n < min)
    throw std::invalid_argument(std::string(who) + ": qubit count must be >= " + std::to_string(min));
}

std::vector<Complex> random_qubit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double cos_t = 2.0 * uni(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * uni(rng);
  const double half = std::acos(cos_t) / 2.0;
  return {std::cos(half), std::polar(std::sin(half), phi)};
}

std::vector<Complex> kron_vec(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  std::vector<Complex> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(x * y);
  return out;
}

std::vector<Complex> random_product_vector(int n, std::mt19937_64& rng) {
  std::vector<Complex> v = random_qubit(rng);
  for (int q = 1; q < n; ++q) v = kron_vec(v, random_qubit(rng));
  return v;
}

// Sum of the weights drawn uniformly then normalized.
std::vector<double> random_weights(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  std::vector<double> w(count);
  double total = 0.0;
  for (auto& x : w) total += (x = uni(rng));
  for (auto& x : w) x /= total;
  return w;
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m) : n_qubits_(0), matrix_(std::move(m)) {
  if (!matrix_.is_square()) throw std::invalid_argument("DensityMatrix: matrix must be square");
  n_qubits_ = qubits_for_dim(matrix_.rows());
}

double DensityMatrix::purity() const { return trace_product(matrix_, matrix_).real(); }

double min_eigenvalue_estimate(const ComplexMatrix& h) {
  const std::size_t n = h.rows();
  double bound = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double row = 0.0;
    for (std::size_t c = 0; c < n; ++c) row += std::abs(h(r, c));
    bound = std::max(bound, row);
  }
  if (bound == 0.0) return 0.0;

  // Power iteration on S = bound*I - h; the top eigenvalue of S is
  // bound - lambda_min(h). Fixed start vector keeps this deterministic.
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> g;
  std::vector<Complex> v(n), w(n);
  for (auto& z : v) z = {g(rng), g(rng)};
  auto normalize = [](std::vector<Complex>& x) {
    double s = 0.0;
    for (const auto& z : x) s += std::norm(z);
    s = std::sqrt(s);
    for (auto& z : x) z /= s;
  };
  normalize(v);
  double mu = 0.0;
  for (int it = 0; it < 2000; ++it) {
    for (std::size_t r = 0; r < n; ++r) {
      Complex acc = bound * v[r];
      for (std::size_t c = 0; c < n; ++c) acc -= h(r, c) * v[c];
      w[r] = acc;
    }
    double rq = 0.0;
    for (std::size_t r = 0; r < n; ++r) rq += (std::conj(v[r]) * w[r]).real();
    normalize(w);
    std::swap(v, w);
    if (it > 20 && std::abs(rq - mu) < 1e-15 * bound) {
      mu = rq;
      break;
    }
    mu = rq;
  }
  return bound - mu;
}

void validate(const DensityMatrix& rho) {
  const ComplexMatrix& m = rho.matrix();
  if (!m.is_finite()) throw ValidationError("finite", "matrix has non-finite entries");
  const double herm = m.hermiticity_defect();
  if (herm > kHermiticityTol)
    throw ValidationError("hermiticity", "matrix deviates from its adjoint by " + std::to_string(herm));
  const Complex tr = m.trace();
  if (std::abs(tr - 1.0) > kTraceTol)
    throw ValidationError("trace", "trace is " + std::to_string(tr.real()) + ", expected 1");
  const double lmin = min_eigenvalue_estimate(m);
  if (lmin < -kPsdTol)
    throw ValidationError("psd", "smallest eigenvalue estimate " + std::to_string(lmin) + " is negative");
}

DensityMatrix pure_state(std::span<const Complex> amps) {
  double s = 0.0;
  for (const auto& z : amps) s += std::norm(z);
  if (s == 0.0) throw std::invalid_argument("pure_state: zero vector");
  const std::size_t d = amps.size();
  ComplexMatrix m(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) m(r, c) = amps[r] * std::conj(amps[c]) / s;
  return DensityMatrix(std::move(m));
}

DensityMatrix make_generalized_ghz(int n, double alpha) {
  require_qubits(n, 2, "make_generalized_ghz");
  if (!std::isfinite(alpha)) throw std::invalid_argument("make_generalized_ghz: alpha must be finite");
  std::vector<Complex> v(std::size_t{1} << n);
  v.front() = std::cos(alpha);
  v.back() = std::sin(alpha);
  return pure_state(v);
}

DensityMatrix make_w(int n) {
  require_qubits(n, 2, "make_w");
  std::vector<Complex> v(std::size_t{1} << n);
  for (int k = 0; k < n; ++k) v[std::size_t{1} << k] = 1.0;
  return pure_state(v);
}

DensityMatrix maximally_mixed(int n) {
  require_qubits(n, 1, "maximally_mixed");
  const std::size_t d = std::size_t{1} << n;
  return DensityMatrix(ComplexMatrix::identity(d) * Complex(1.0 / static_cast<double>(d)));
}

DensityMatrix mix(std::span<const WeightedState> components) {
  if (components.empty()) throw std::invalid_argument("mix: no components");
  const int n = components.front().state.n_qubits();
  double total = 0.0;
  for (const auto& c : components) {
    if (c.weight < 0.0 || c.weight > 1.0) throw std::invalid_argument("mix: weight outside [0,1]");
    if (c.state.n_qubits() != n) throw std::invalid_argument("mix: components differ in qubit count");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("mix: weights do not sum to 1");
  ComplexMatrix m(components.front().state.dim(), components.front().state.dim());
  for (const auto& c : components) m += c.state.matrix() * Complex(c.weight);
  return DensityMatrix(std::move(m));
}

DensityMatrix embed_product(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()));
}

DensityMatrix random_product_state(int n, std::uint64_t seed) {
  require_qubits(n, 1, "random_product_state");
  std::mt19937_64 rng(seed);
  return pure_state(random_product_vector(n, rng));
}

DensityMatrix random_pure_state(int n, std::uint64_t seed) {
  require_qubits(n, 1, "random_pure_state");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Complex> v(std::size_t{1} << n);
  for (auto& z : v) z = {g(rng), g(rng)};
  return pure_state(v);
}

DensityMatrix random_separable_state(int n, int terms, std::uint64_t seed) {
  if (terms < 1) throw std::invalid_argument("random_separable_state: need at least one term");
  std::mt19937_64 rng(seed);
  const auto w = random_weights(static_cast<std::size_t>(terms), rng);
  const std::size_t d = std::size_t{1} << n;
  ComplexMatrix m(d, d);
  for (int t = 0; t < terms; ++t)
    m += pure_state(random_product_vector(n, rng)).matrix() * Complex(w[static_cast<std::size_t>(t)]);
  return DensityMatrix(std::move(m));
}

DensityMatrix random_mixed_state(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double pure_weight = 0.4 + 0.6 * uni(rng);
  const std::uint64_t s1 = rng(), s2 = rng(), s3 = rng();
  const DensityMatrix psi = random_pure_state(n, s1);
  const DensityMatrix sep = random_separable_state(n, 2, s2);
  const DensityMatrix prod = random_product_state(n, s3);
  const double rest = 1.0 - pure_weight;
  const double split = uni(rng);
  ComplexMatrix m = psi.matrix() * Complex(pure_weight);
  m += sep.matrix() * Complex(rest * split);
  m += prod.matrix() * Complex(rest * (1.0 - split));
  return DensityMatrix(std::move(m));
}

DensityMatrix permute_qubits(const DensityMatrix& rho, const QubitPerm& perm) {
  const int n = rho.n_qubits();
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("permute_qubits: wrong length");
  std::vector<bool> seen(static_cast<std::size_t>(n));
  for (int q : perm) {
    if (q < 0 || q >= n || seen[static_cast<std::size_t>(q)])
      throw std::invalid_argument("permute_qubits: not a permutation");
    seen[static_cast<std::size_t>(q)] = true;
  }
  const std::size_t d = rho.dim();
  std::vector<std::size_t> source(d);
  for (std::size_t x = 0; x < d; ++x) {
    std::size_t y = 0;
    for (int r = 0; r < n; ++r) {
      const std::size_t bit = (x >> (n - 1 - r)) & 1U;
      y |= bit << (n - 1 - perm[static_cast<std::size_t>(r)]);
    }
    source[x] = y;
  }
  ComplexMatrix m(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) m(r, c) = rho(source[r], source[c]);
  return DensityMatrix(std::move(m));
}

DensityMatrix flip_all_qubits(const DensityMatrix& rho) {
  const std::size_t d = rho.dim();
  const std::size_t mask = d - 1;
  ComplexMatrix m(d, d);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) m(r, c) = rho(r ^ mask, c ^ mask);
  return DensityMatrix(std::move(m));
}

namespace {

double parse_double(std::string_view tok, std::size_t line, const std::string& whole) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || tok.empty())
    throw ParseError("line " + std::to_string(line) + ": non-numeric token '" + whole + "'");
  return v;
}

}  // namespace

DensityMatrix read_density(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("line 1: empty input, expected 'qubits N'");
  int n = 0;
  {
    std::istringstream hs(line);
    std::string key, extra;
    if (!(hs >> key >> n) || key != "qubits" || (hs >> extra))
      throw ParseError("line 1: malformed header, expected 'qubits N'");
    if (n < 1 || n > 12) throw ParseError("line 1: qubit count out of range");
  }
  const std::size_t d = std::size_t{1} << n;
  ComplexMatrix m(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    const std::size_t lineno = r + 2;
    if (!std::getline(in, line))
      throw ParseError("line " + std::to_string(lineno) + ": missing matrix row");
    std::istringstream ls(line);
    std::string tok;
    std::size_t c = 0;
    while (ls >> tok) {
      if (c >= d)
        throw ParseError("line " + std::to_string(lineno) + ": too many entries (expected " +
                         std::to_string(d) + ")");
      const auto comma = tok.find(',');
      if (comma == std::string::npos || tok.find(',', comma + 1) != std::string::npos)
        throw ParseError("line " + std::to_string(lineno) + ": token '" + tok + "' is not 're,im'");
      const std::string_view sv(tok);
      m(r, c) = {parse_double(sv.substr(0, comma), lineno, tok), parse_double(sv.substr(comma + 1), lineno, tok)};
      ++c;
    }
    if (c != d)
      throw ParseError("line " + std::to_string(lineno) + ": expected " + std::to_string(d) +
                       " entries, found " + std::to_string(c));
  }
  std::size_t extra_line = d + 2;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos)
      throw ParseError("line " + std::to_string(extra_line) + ": trailing content after matrix");
    ++extra_line;
  }
  DensityMatrix rho(std::move(m));
  validate(rho);
  return rho;
}

void write_density(std::ostream& out, const DensityMatrix& rho) {
  out << "qubits " << rho.n_qubits() << '\n';
  char buf[96];
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", rho(r, c).real(), rho(r, c).imag());
      if (c) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

DensityMatrix load_density(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path.string());
  return read_density(in);
}

void save_density(const std::filesystem::path& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  write_density(out, rho);
  if (!out) throw std::ios_base::failure("write failed for " + path.string());
}

}  // namespace bellviol
