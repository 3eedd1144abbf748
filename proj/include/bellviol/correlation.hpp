#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bellviol/linalg.hpp"
#include "bellviol/states.hpp"

namespace bellviol {

enum class Execution { serial, parallel };

// Real Pauli correlation tensor T_{i1..iN} = Tr(rho sigma_i1 (x) ... (x) sigma_iN) / 2^N.
// Stored densely with i1 the most significant base-4 digit.
class CorrelationTensor {
 public:
  CorrelationTensor(int n_qubits, std::vector<double> entries);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return entries_.size(); }
  const std::vector<double>& entries() const { return entries_; }

  double operator[](std::size_t flat) const { return entries_[flat]; }
  double at(std::span<const int> indices) const;

  static std::size_t flat_index(std::span<const int> indices);

 private:
  int n_qubits_;
  std::vector<double> entries_;
};

// Each entry is computed from the monomial structure of the Pauli string in
// O(2^N); entries are independent and split across OpenMP threads in
// parallel mode. Both modes produce bitwise-identical output.
CorrelationTensor correlation_tensor(const DensityMatrix& rho, Execution exec = Execution::parallel);

// Literal definition: explicit Kronecker products and trace_product. Slow;
// kept as a reference for tests and benchmarks.
CorrelationTensor correlation_tensor_reference(const DensityMatrix& rho);

// rho = sum_idx T_idx sigma_idx. Throws ValidationError("normalization") if
// the all-zero entry differs from 1/2^N by more than 1e-12.
DensityMatrix reconstruct_density(const CorrelationTensor& t, Execution exec = Execution::parallel);

// Tensor with axes reordered into role order: result(i_1..i_N) has the index
// of qubit perm[r] at position r.
CorrelationTensor permute_tensor(const CorrelationTensor& t, const QubitPerm& perm);

// (i,j) entry, i,j in 1..3: T with qubit perm[0] at i, perm[1] at j and
// qubit perm[m] at fixed[m-2] for m >= 2. Returned zero-based.
RealMat3 slice_matrix(const CorrelationTensor& t, const QubitPerm& perm, std::span<const int> fixed);

// Level-m slab (m is 1-based, 3 <= m <= N): roles 1..m-1 fixed at 0, role m
// runs over 1..3, roles m+1..N left free over 0..3. Layout is
// k * 4^(N-m) + (base-4 index of the free roles, role m+1 most significant),
// so the result has 3 * 4^(N-m) entries.
std::vector<double> subvector(const CorrelationTensor& t, const QubitPerm& perm, int level);

// Contracts the free axes of a slab against unit vectors: axis r gets
// (0, b_r), i.e. only the sigma_1..3 components. `bs.size()` must equal the
// number of free axes. Returns the leading 3-vector.
RealVec3 contract_slab(std::span<const double> slab, std::span<const RealVec3> bs);

}  // namespace bellviol
