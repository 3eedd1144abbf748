#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bellviol/linalg.hpp"
#include "bellviol/states.hpp"

namespace bellviol {

// Two dichotomic observables per qubit: A_q = a[q] . sigma, A'_q = a_prime[q] . sigma.
struct MeasurementSettings {
  std::vector<RealVec3> a;
  std::vector<RealVec3> a_prime;

  int n_qubits() const { return static_cast<int>(a.size()); }

  // Throws std::invalid_argument on size mismatch or non-unit vectors (1e-12).
  void check() const;

  static MeasurementSettings uniform(int n, const RealVec3& a, const RealVec3& a_prime);
};

enum class OperatorKind { chsh, recursive, mabk, chen };

// One Bell operator. For the recursive family, `index` is the 1-based k of
// B_N^k and `perm` the role-to-qubit map it induces (see index_to_perm).
struct BellOperatorSpec {
  OperatorKind kind = OperatorKind::chsh;
  int n_qubits = 2;
  long index = 0;
  QubitPerm perm;

  static BellOperatorSpec chsh();
  static BellOperatorSpec recursive(int n, long k);
  static BellOperatorSpec mabk(int n);
  static BellOperatorSpec chen(int n);

  // `recursive:N=4,k=12`, `chsh`, `mabk:N=3`, `chen:N=4`. Throws ParseError.
  static BellOperatorSpec parse(std::string_view text);
  std::string to_string() const;
};

// n!/2
long family_size(int n);

// Qubit roles of the recursive operator B_N^k. Roles 0 and 1 are the CHSH
// core (b-qubit and a-qubit), role m >= 2 is the qubit adjoined at recursion
// depth m+1. The numbering follows the recursion itself:
//   k = (i - 1) (N-1)!/2 + j
// with i the (1-based) qubit adjoined last and j the index of the inner
// operator on the remaining qubits, taken in ascending order. The CHSH core
// is symmetric, so perm[0] < perm[1] always. For k = N!/2 this is the
// identity.
QubitPerm index_to_perm(int n, long k);

// Inverse of index_to_perm; accepts either order of the first two roles.
long perm_to_index(const QubitPerm& perm);

// 1/2 [A1 A2 + A1' A2 + A1 A2' - A1' A2']
ComplexMatrix chsh_matrix(const MeasurementSettings& s);

// B_N^k built by adjoining one qubit per level at its own tensor slot:
//   B <- B_inner (x) (A + A')/2 + I (x) (A - A')/2
ComplexMatrix recursive_bell_matrix(const BellOperatorSpec& spec, const MeasurementSettings& s);

// MABK operator by direct expansion over the 2^N products of A / A'.
ComplexMatrix mabk_matrix(const MeasurementSettings& s);

// MABK on the first N-1 qubits extended by qubit N.
ComplexMatrix chen_matrix(const MeasurementSettings& s);

ComplexMatrix operator_matrix(const BellOperatorSpec& spec, const MeasurementSettings& s);

// Local factor of a product term.
enum class Factor : std::uint8_t { identity, a, a_prime };

struct ProductTerm {
  double coeff;
  std::vector<Factor> factors;  // indexed by qubit
};

// The operator as a real-linear combination of products of local observables.
std::vector<ProductTerm> operator_terms(const BellOperatorSpec& spec);

ComplexMatrix terms_matrix(const std::vector<ProductTerm>& terms, const MeasurementSettings& s);

// Value of the recursive operator under a deterministic local strategy:
// outcome[q] and outcome_prime[q] are the +-1 values assigned to A_q, A'_q.
// Evaluated on the recursion with integer arithmetic.
int classical_value(const BellOperatorSpec& spec, const std::vector<int>& outcome,
                    const std::vector<int>& outcome_prime);

struct ClassicalRange {
  int min;
  int max;
  long assignments;
};

// Exhaustive over all 4^N deterministic strategies.
ClassicalRange classical_range(const BellOperatorSpec& spec);

}  // namespace bellviol
