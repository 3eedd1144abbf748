#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "bellviol/linalg.hpp"

namespace bellviol {

// Role-to-qubit map: role r is played by qubit perm[r]. Zero-based.
using QubitPerm = std::vector<int>;

// N-qubit density matrix. Qubit 0 is the most significant Kronecker factor
// and |0> = (1, 0)^T, so sigma_z |0> = +|0>.
//
// Construction only checks the shape; call validate() on untrusted input.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return matrix_(r, c); }

  double purity() const;

 private:
  int n_qubits_;
  ComplexMatrix matrix_;
};

// Tolerances applied to untrusted density matrices.
inline constexpr double kHermiticityTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-8;

// Throws ValidationError naming "finite", "hermiticity", "trace" or "psd".
void validate(const DensityMatrix& rho);

// Smallest-eigenvalue estimate via power iteration on (c I - rho), where c
// is a Gershgorin bound on the spectrum.
double min_eigenvalue_estimate(const ComplexMatrix& hermitian);

// Projector onto a (not necessarily normalized) state vector.
DensityMatrix pure_state(std::span<const Complex> amplitudes);

// cos(alpha)|0...0> + sin(alpha)|1...1>
DensityMatrix make_generalized_ghz(int n, double alpha);

// (1/sqrt(n)) sum_k |0..1_k..0>
DensityMatrix make_w(int n);

DensityMatrix maximally_mixed(int n);

struct WeightedState {
  double weight;
  DensityMatrix state;
};

// Convex combination. Weights must lie in [0,1] and sum to 1 within 1e-12.
DensityMatrix mix(std::span<const WeightedState> components);

// a (x) b on n_a + n_b qubits, a's qubits first.
DensityMatrix embed_product(const DensityMatrix& a, const DensityMatrix& b);

// Tensor product of n Haar-random single-qubit pure states.
DensityMatrix random_product_state(int n, std::uint64_t seed);

// Haar-random pure state on n qubits.
DensityMatrix random_pure_state(int n, std::uint64_t seed);

// Convex mixture of `terms` random product states with random weights.
DensityMatrix random_separable_state(int n, int terms, std::uint64_t seed);

// Mixture of one random pure state and a few random product states; a mix
// of entangled and separable material used by the agreement suites.
DensityMatrix random_mixed_state(int n, std::uint64_t seed);

// Relabels qubits so that qubit r of the result is qubit perm[r] of rho.
DensityMatrix permute_qubits(const DensityMatrix& rho, const QubitPerm& perm);

// X (x) ... (x) X rho X (x) ... (x) X
DensityMatrix flip_all_qubits(const DensityMatrix& rho);

// Text format:
//   qubits N
//   2^N lines of 2^N tokens "re,im"
// Reading throws ParseError for syntax problems and ValidationError when the
// parsed matrix is not a valid state.
DensityMatrix read_density(std::istream& in);
void write_density(std::ostream& out, const DensityMatrix& rho);

DensityMatrix load_density(const std::filesystem::path& path);
void save_density(const std::filesystem::path& path, const DensityMatrix& rho);

}  // namespace bellviol
