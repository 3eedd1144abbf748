#include "bellviol/correlation.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bellviol/errors.hpp"

namespace bellviol {

namespace {

std::size_t pow4(int n) { return std::size_t{1} << (2 * n); }

int digit(std::size_t flat, int pos, int n) { return static_cast<int>((flat >> (2 * (n - 1 - pos))) & 3U); }

void check_perm(const QubitPerm& perm, int n) {
  if (static_cast<int>(perm.size()) != n) throw std::invalid_argument("qubit permutation has wrong length");
  std::vector<bool> seen(static_cast<std::size_t>(n));
  for (int q : perm) {
    if (q < 0 || q >= n || seen[static_cast<std::size_t>(q)])
      throw std::invalid_argument("invalid qubit permutation");
    seen[static_cast<std::size_t>(q)] = true;
  }
}

// Pauli string as a monomial matrix: P(r ^ flip, r) = phase(r).
struct PauliString {
  std::size_t flip = 0;  // bits where sigma_x or sigma_y acts
  std::size_t zmask = 0;  // bits contributing (-1)^bit from sigma_y/sigma_z
  int y_count = 0;
};

PauliString decode(std::size_t flat, int n) {
  PauliString p;
  for (int q = 0; q < n; ++q) {
    const int s = digit(flat, q, n);
    const std::size_t bit = std::size_t{1} << (n - 1 - q);
    if (s == 1 || s == 2) p.flip |= bit;
    if (s == 2 || s == 3) p.zmask |= bit;
    if (s == 2) ++p.y_count;
  }
  return p;
}

// Entry P(row, col) of the Pauli string for col = row ^ flip.
// sigma_y = [[0,-i],[i,0]]: (0,1) -> -i, (1,0) -> +i, i.e. i * (-1)^{col bit}.
// sigma_z = diag(1,-1): (-1)^{col bit}. So phase = i^{#y} (-1)^{popcount(col & zmask)}.
Complex pauli_entry_by_col(const PauliString& p, std::size_t col) {
  static const Complex ipow[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  const double sign = (std::popcount(col & p.zmask) & 1) ? -1.0 : 1.0;
  return ipow[p.y_count & 3] * sign;
}

double tensor_entry(const ComplexMatrix& m, std::size_t flat, int n) {
  const PauliString p = decode(flat, n);
  const std::size_t d = m.rows();
  // Tr(rho P) = sum_c rho(c, r) P(r, c) with r = c ^ flip.
  Complex acc = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    const std::size_t r = c ^ p.flip;
    acc += m(c, r) * pauli_entry_by_col(p, c);
  }
  return acc.real() / static_cast<double>(d);
}

}  // namespace

CorrelationTensor::CorrelationTensor(int n_qubits, std::vector<double> entries)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
  if (n_qubits < 1 || entries_.size() != pow4(n_qubits))
    throw std::invalid_argument("CorrelationTensor: entry count must be 4^n");
}

std::size_t CorrelationTensor::flat_index(std::span<const int> indices) {
  std::size_t f = 0;
  for (int i : indices) {
    if (i < 0 || i > 3) throw std::out_of_range("CorrelationTensor: index must be in 0..3");
    f = (f << 2) | static_cast<std::size_t>(i);
  }
  return f;
}

double CorrelationTensor::at(std::span<const int> indices) const {
  if (static_cast<int>(indices.size()) != n_qubits_)
    throw std::invalid_argument("CorrelationTensor: wrong number of indices");
  return entries_[flat_index(indices)];
}

CorrelationTensor correlation_tensor(const DensityMatrix& rho, Execution exec) {
  const int n = rho.n_qubits();
  const std::size_t total = pow4(n);
  std::vector<double> out(total);
  const ComplexMatrix& m = rho.matrix();
  const long long count = static_cast<long long>(total);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
  for (long long f = 0; f < count; ++f) out[static_cast<std::size_t>(f)] = tensor_entry(m, static_cast<std::size_t>(f), n);
  return CorrelationTensor(n, std::move(out));
}

CorrelationTensor correlation_tensor_reference(const DensityMatrix& rho) {
  const int n = rho.n_qubits();
  std::vector<double> out(pow4(n));
  const double scale = 1.0 / static_cast<double>(rho.dim());
  for (std::size_t f = 0; f < out.size(); ++f) {
    ComplexMatrix p = pauli(digit(f, 0, n));
    for (int q = 1; q < n; ++q) p = kron(p, pauli(digit(f, q, n)));
    out[f] = trace_product(rho.matrix(), p).real() * scale;
  }
  return CorrelationTensor(n, std::move(out));
}

DensityMatrix reconstruct_density(const CorrelationTensor& t, Execution exec) {
  const int n = t.n_qubits();
  const std::size_t d = std::size_t{1} << n;
  const double expected = 1.0 / static_cast<double>(d);
  if (std::abs(t[0] - expected) > 1e-12)
    throw ValidationError("normalization", "all-zero entry is " + std::to_string(t[0]) + ", expected 1/2^n");

  std::vector<PauliString> strings(t.size());
  for (std::size_t f = 0; f < t.size(); ++f) strings[f] = decode(f, n);

  ComplexMatrix m(d, d);
  const long long dl = static_cast<long long>(d);
  // Row r of P has its single nonzero at column c = r ^ flip.
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
  for (long long rl = 0; rl < dl; ++rl) {
    const std::size_t r = static_cast<std::size_t>(rl);
    for (std::size_t f = 0; f < t.size(); ++f) {
      const double coeff = t[f];
      if (coeff == 0.0) continue;
      const std::size_t c = r ^ strings[f].flip;
      m(r, c) += coeff * pauli_entry_by_col(strings[f], c);
    }
  }
  return DensityMatrix(std::move(m));
}

CorrelationTensor permute_tensor(const CorrelationTensor& t, const QubitPerm& perm) {
  const int n = t.n_qubits();
  check_perm(perm, n);
  std::vector<double> out(t.size());
  for (std::size_t f = 0; f < out.size(); ++f) {
    std::size_t src = 0;
    for (int r = 0; r < n; ++r)
      src |= static_cast<std::size_t>(digit(f, r, n)) << (2 * (n - 1 - perm[static_cast<std::size_t>(r)]));
    out[f] = t[src];
  }
  return CorrelationTensor(n, std::move(out));
}

RealMat3 slice_matrix(const CorrelationTensor& t, const QubitPerm& perm, std::span<const int> fixed) {
  const int n = t.n_qubits();
  check_perm(perm, n);
  if (static_cast<int>(fixed.size()) != n - 2) throw std::invalid_argument("slice_matrix: need n-2 fixed indices");
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int m = 2; m < n; ++m) {
    const int v = fixed[static_cast<std::size_t>(m - 2)];
    if (v < 0 || v > 3) throw std::out_of_range("slice_matrix: fixed index must be in 0..3");
    idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(m)])] = v;
  }
  RealMat3 out{};
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      idx[static_cast<std::size_t>(perm[0])] = i;
      idx[static_cast<std::size_t>(perm[1])] = j;
      out[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = t.at(idx);
    }
  return out;
}

std::vector<double> subvector(const CorrelationTensor& t, const QubitPerm& perm, int level) {
  const int n = t.n_qubits();
  check_perm(perm, n);
  if (level < 3 || level > n) throw std::out_of_range("subvector: level must satisfy 3 <= m <= n");
  const int free_axes = n - level;
  const std::size_t block = pow4(free_axes);
  std::vector<double> slab(3 * block);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (int k = 1; k <= 3; ++k) {
    idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(level - 1)])] = k;
    for (std::size_t f = 0; f < block; ++f) {
      for (int a = 0; a < free_axes; ++a)
        idx[static_cast<std::size_t>(perm[static_cast<std::size_t>(level + a)])] = digit(f, a, free_axes);
      slab[static_cast<std::size_t>(k - 1) * block + f] = t.at(idx);
    }
  }
  return slab;
}

RealVec3 contract_slab(std::span<const double> slab, std::span<const RealVec3> bs) {
  const int free_axes = static_cast<int>(bs.size());
  const std::size_t block = pow4(free_axes);
  if (slab.size() != 3 * block) throw std::invalid_argument("contract_slab: slab size does not match vector count");
  RealVec3 out{};
  for (std::size_t f = 0; f < block; ++f) {
    double w = 1.0;
    for (int a = 0; a < free_axes && w != 0.0; ++a) {
      const int s = digit(f, a, free_axes);
      w *= s == 0 ? 0.0 : bs[static_cast<std::size_t>(a)][static_cast<std::size_t>(s - 1)];
    }
    if (w == 0.0) continue;
    for (std::size_t k = 0; k < 3; ++k) out[k] += w * slab[k * block + f];
  }
  return out;
}

}  // namespace bellviol
