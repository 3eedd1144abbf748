#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bellviol/bell_ops.hpp"
#include "bellviol/correlation.hpp"
#include "bellviol/states.hpp"

namespace bellviol {

struct OptimizerConfig {
  int restarts = 8;
  // Theta samples per b-vector; phi gets twice as many. 0 picks 12 when at
  // most two b-vectors are optimized and 8 beyond.
  int grid_points_per_angle = 0;
  double local_tol = 1e-8;
  int max_iters = 2000;
  std::uint64_t seed = 42;
  Execution exec = Execution::parallel;

  // Throws std::invalid_argument.
  void check() const;
};

enum class Method { formula, oracle };

struct ViolationResult {
  double value = 0.0;  // max |<B>|
  Method method = Method::formula;
  std::vector<RealVec3> argmax_b;  // b_3..b_N, formula only
  // Oracle: the maximizing directions found. Formula: directions rebuilt
  // from argmax_b that attain the reported value.
  std::optional<MeasurementSettings> argmax_settings;
  long evaluations = 0;
  bool converged = false;
};

// Closed-form maximal mean value for fixed b_3..b_N of the recursive operator
// whose roles are assigned by `perm`:
//   2^N sqrt( l1(M) + l2(M) + sum_{m=3..N} (|v_m|^2 - <b_m, v_m>^2) )
// M is the (role 1, role 2) slice contracted with b_3..b_N, l1 >= l2 the two
// largest eigenvalues of M^T M, and v_m the level-m subvector contracted with
// b_{m+1}..b_N.
double formula_objective(const CorrelationTensor& t, const QubitPerm& perm, std::span<const RealVec3> b);

MeasurementSettings settings_from_formula(const CorrelationTensor& t, const QubitPerm& perm,
                                          std::span<const RealVec3> b);

// Precomputed slabs for repeated objective evaluation on one state.
class FormulaObjective {
 public:
  FormulaObjective(const CorrelationTensor& t, const QubitPerm& perm);

  int n_qubits() const { return n_; }
  int levels() const { return n_ - 2; }
  double operator()(std::span<const RealVec3> b) const;

  // Measurement directions on every qubit at which the operator's mean value
  // equals operator()(b): the optimal pairs for the CHSH core come from the
  // top two left singular vectors of M, and each adjoined qubit splits its
  // weight between b_m and the part of v_m orthogonal to it.
  MeasurementSettings settings(std::span<const RealVec3> b) const;

 private:
  RealMat3 pair_matrix(std::span<const RealVec3> b) const;
  RealVec3 level_vector(int level, std::span<const RealVec3> b) const;

  int n_;
  QubitPerm perm_;
  std::vector<double> pair_slab_;  // 9 * 4^(N-2)
  std::vector<std::vector<double>> level_slabs_;  // level m = 3..N
};

// Maximizes the formula over b_3..b_N parametrized by (theta, phi) angles:
// a coarse grid seeds Nelder-Mead refinement, supplemented by random starts.
// Only defined for the recursive family; throws IncompatibleError otherwise.
ViolationResult max_violation_formula(const DensityMatrix& rho, const BellOperatorSpec& spec,
                                      const OptimizerConfig& cfg = {});

// Brute-force maximization of |Tr(rho B)| over all 2N measurement directions
// for any operator kind. Each restart runs an alternating (see-saw) ascent:
// the mean value is affine in each single direction, so every step moves
// one direction to the exact maximizer given the others. The result is a
// lower bound on the true maximum.
ViolationResult oracle_max_violation(const DensityMatrix& rho, const BellOperatorSpec& spec,
                                     const OptimizerConfig& cfg = {});

// Re Tr(rho B(s)).
double mean_value(const DensityMatrix& rho, const BellOperatorSpec& spec, const MeasurementSettings& s);

enum class StateFamily { w_ghz_mix, w4_white_noise };

// "w-ghz-mix" or "w4-white-noise"; throws ParseError.
StateFamily parse_family(std::string_view name);
std::string_view family_name(StateFamily family);

// w-ghz-mix:      x |W3><W3| + (1 - x) |GHZ3><GHZ3|
// w4-white-noise: (x/16) I + (1 - x) |W4><W4|
DensityMatrix family_state(StateFamily family, double x);

struct SweepPoint {
  double x;
  double value;
};

std::vector<SweepPoint> sweep(StateFamily family, const BellOperatorSpec& spec, const OptimizerConfig& cfg,
                              std::span<const double> xs);

// Abscissae where the sweep crosses `threshold`. Each sign change between
// neighbouring points is refined by bisection on `refine` down to `x_tol`;
// without `refine` the crossing is linearly interpolated.
std::vector<double> crossings(std::span<const SweepPoint> points, double threshold = 1.0,
                              const std::function<double(double)>& refine = {}, double x_tol = 1e-3);

// Evenly spaced points on [0, 1].
std::vector<double> unit_grid(int points);

// Sweep the family then refine each crossing with fresh formula optimization.
std::vector<double> family_crossings(StateFamily family, const BellOperatorSpec& spec, const OptimizerConfig& cfg,
                                     std::span<const SweepPoint> points, double threshold = 1.0);

}  // namespace bellviol
