#include "bellviol/violation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "bellviol/errors.hpp"
#include "bellviol/optimize.hpp"

namespace bellviol {

namespace {

constexpr std::size_t kGridBudget = std::size_t{1} << 19;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t pow4(int n) { return std::size_t{1} << (2 * n); }

// Contracts every axis after the leading `lead` entries of `slab` with
// (0, b_r) and returns the `lead` results.
std::vector<double> contract_trailing(std::span<const double> slab, std::size_t lead, std::span<const RealVec3> bs) {
  const int axes = static_cast<int>(bs.size());
  const std::size_t block = pow4(axes);
  std::vector<double> out(lead, 0.0);
  if (axes == 0) {
    std::copy(slab.begin(), slab.begin() + static_cast<std::ptrdiff_t>(lead), out.begin());
    return out;
  }
  // Only digits 1..3 contribute; walk the 3^axes nonzero combinations.
  std::vector<int> digits(static_cast<std::size_t>(axes), 1);
  while (true) {
    double w = 1.0;
    std::size_t f = 0;
    for (int a = 0; a < axes; ++a) {
      const int d = digits[static_cast<std::size_t>(a)];
      w *= bs[static_cast<std::size_t>(a)][static_cast<std::size_t>(d - 1)];
      f = (f << 2) | static_cast<std::size_t>(d);
    }
    if (w != 0.0)
      for (std::size_t k = 0; k < lead; ++k) out[k] += w * slab[k * block + f];
    int a = axes - 1;
    while (a >= 0 && digits[static_cast<std::size_t>(a)] == 3) digits[static_cast<std::size_t>(a--)] = 1;
    if (a < 0) break;
    ++digits[static_cast<std::size_t>(a)];
  }
  return out;
}

std::vector<RealVec3> angles_to_units(std::span<const double> x) {
  std::vector<RealVec3> b(x.size() / 2);
  for (std::size_t m = 0; m < b.size(); ++m) b[m] = unit_from_angles(x[2 * m], x[2 * m + 1]);
  return b;
}

int count_near_best(const std::vector<double>& values, double best, double tol) {
  return static_cast<int>(std::count_if(values.begin(), values.end(), [&](double v) { return v >= best - tol; }));
}

}  // namespace

void OptimizerConfig::check() const {
  if (restarts < 1) throw std::invalid_argument("optimizer: restarts must be >= 1");
  if (!(local_tol > 0.0)) throw std::invalid_argument("optimizer: local_tol must be > 0");
  if (max_iters < 1) throw std::invalid_argument("optimizer: max_iters must be >= 1");
  if (grid_points_per_angle < 0) throw std::invalid_argument("optimizer: grid points must be >= 0");
}

FormulaObjective::FormulaObjective(const CorrelationTensor& t, const QubitPerm& perm)
    : n_(t.n_qubits()), perm_(perm) {
  if (n_ < 3) throw std::invalid_argument("formula objective needs at least 3 qubits");
  const std::size_t block = pow4(n_ - 2);
  pair_slab_.assign(9 * block, 0.0);
  std::vector<int> fixed(static_cast<std::size_t>(n_ - 2));
  for (std::size_t f = 0; f < block; ++f) {
    for (int a = 0; a < n_ - 2; ++a)
      fixed[static_cast<std::size_t>(a)] = static_cast<int>((f >> (2 * (n_ - 3 - a))) & 3U);
    const RealMat3 s = slice_matrix(t, perm, fixed);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) pair_slab_[(3 * i + j) * block + f] = s[i][j];
  }
  for (int m = 3; m <= n_; ++m) level_slabs_.push_back(subvector(t, perm, m));
}

RealMat3 FormulaObjective::pair_matrix(std::span<const RealVec3> b) const {
  const auto flat = contract_trailing(pair_slab_, 9, b);
  RealMat3 m{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) m[i][j] = flat[3 * i + j];
  return m;
}

RealVec3 FormulaObjective::level_vector(int level, std::span<const RealVec3> b) const {
  const auto idx = static_cast<std::size_t>(level - 3);
  const auto v = contract_trailing(level_slabs_[idx], 3, b.subspan(idx + 1));
  return {v[0], v[1], v[2]};
}

double FormulaObjective::operator()(std::span<const RealVec3> b) const {
  if (static_cast<int>(b.size()) != n_ - 2) throw std::invalid_argument("formula objective: need N-2 unit vectors");
  const auto ev = eig_sym3(gram(pair_matrix(b)));
  double total = ev[0] + ev[1];
  for (int level = 3; level <= n_; ++level) {
    const RealVec3 v = level_vector(level, b);
    const double proj = dot(b[static_cast<std::size_t>(level - 3)], v);
    total += dot(v, v) - proj * proj;
  }
  return std::ldexp(std::sqrt(std::max(0.0, total)), n_);
}

MeasurementSettings FormulaObjective::settings(std::span<const RealVec3> b) const {
  if (static_cast<int>(b.size()) != n_ - 2) throw std::invalid_argument("formula settings: need N-2 unit vectors");
  const auto un = static_cast<std::size_t>(n_);
  std::vector<RealVec3> role_a(un), role_ap(un);

  auto split = [](const RealVec3& along, const RealVec3& across, double angle, RealVec3& a, RealVec3& ap) {
    const double c = std::cos(angle), s = std::sin(angle);
    a = c * along + s * across;
    ap = c * along - s * across;
  };

  // CHSH core: <b1, M a2> cos t + <b1', M a2'> sin t with b1 _|_ b1'.
  const RealMat3 m = pair_matrix(b);
  RealSym3 mmt;  // M M^T
  {
    RealMat3 mt{};
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) mt[i][j] = m[j][i];
    mmt = gram(mt);
  }
  const SymEigen3 eig = eig_sym3_vectors(mmt);
  const RealVec3 b1 = eig.vectors[0], b1p = eig.vectors[1];
  auto mt_times = [&](const RealVec3& u) {
    return RealVec3{m[0][0] * u[0] + m[1][0] * u[1] + m[2][0] * u[2], m[0][1] * u[0] + m[1][1] * u[1] + m[2][1] * u[2],
                    m[0][2] * u[0] + m[1][2] * u[1] + m[2][2] * u[2]};
  };
  const RealVec3 w1 = mt_times(b1), w2 = mt_times(b1p);
  const double x = norm(w1), y = norm(w2);
  role_a[1] = x > 0 ? (1.0 / x) * w1 : RealVec3{0, 0, 1};
  role_ap[1] = y > 0 ? (1.0 / y) * w2 : RealVec3{0, 0, 1};
  split(b1, b1p, std::atan2(y, x), role_a[0], role_ap[0]);

  double radius = std::hypot(x, y);
  for (int level = 3; level <= n_; ++level) {
    const auto idx = static_cast<std::size_t>(level - 3);
    const RealVec3& bm = b[idx];
    const RealVec3 v = level_vector(level, b);
    const RealVec3 perp = v - dot(bm, v) * bm;
    const double y_m = norm(perp);
    const RealVec3 bmp = y_m > 1e-300 ? (1.0 / y_m) * perp : any_orthogonal(bm);
    split(bm, bmp, std::atan2(y_m, radius), role_a[idx + 2], role_ap[idx + 2]);
    radius = std::hypot(radius, y_m);
  }

  MeasurementSettings s;
  s.a.resize(un);
  s.a_prime.resize(un);
  for (std::size_t r = 0; r < un; ++r) {
    const auto q = static_cast<std::size_t>(perm_[r]);
    s.a[q] = normalized(role_a[r]);
    s.a_prime[q] = normalized(role_ap[r]);
  }
  return s;
}

double formula_objective(const CorrelationTensor& t, const QubitPerm& perm, std::span<const RealVec3> b) {
  return FormulaObjective(t, perm)(b);
}

MeasurementSettings settings_from_formula(const CorrelationTensor& t, const QubitPerm& perm,
                                          std::span<const RealVec3> b) {
  return FormulaObjective(t, perm).settings(b);
}

ViolationResult max_violation_formula(const DensityMatrix& rho, const BellOperatorSpec& spec,
                                      const OptimizerConfig& cfg) {
  if (spec.kind != OperatorKind::recursive)
    throw IncompatibleError("no closed-form maximum for operator " + spec.to_string());
  if (spec.n_qubits != rho.n_qubits())
    throw IncompatibleError("operator acts on " + std::to_string(spec.n_qubits) + " qubits, state has " +
                            std::to_string(rho.n_qubits()));
  cfg.check();
  const bool parallel = cfg.exec == Execution::parallel;
  const FormulaObjective objective(correlation_tensor(rho, cfg.exec), spec.perm);
  const int levels = objective.levels();
  const std::size_t dim = 2 * static_cast<std::size_t>(levels);

  auto f = [&](std::span<const double> x) { return objective(angles_to_units(x)); };

  // Coarse stage.
  const int g = cfg.grid_points_per_angle > 0 ? cfg.grid_points_per_angle : (levels <= 2 ? 12 : 8);
  const std::size_t per_level = 2 * static_cast<std::size_t>(g) * static_cast<std::size_t>(g);
  std::size_t grid_total = 1;
  bool full_grid = true;
  for (int l = 0; l < levels; ++l) {
    if (grid_total > kGridBudget / per_level) {
      full_grid = false;
      break;
    }
    grid_total *= per_level;
  }
  if (!full_grid) grid_total = kGridBudget;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto random_point = [&](std::mt19937_64& r) {
    std::vector<double> x(dim);
    for (std::size_t m = 0; m < dim; m += 2) {
      x[m] = std::asin(2.0 * uni(r) - 1.0);
      x[m + 1] = 2.0 * std::numbers::pi * uni(r);
    }
    return x;
  };

  std::vector<std::vector<double>> sampled;
  if (!full_grid) {
    sampled.reserve(grid_total);
    for (std::size_t i = 0; i < grid_total; ++i) sampled.push_back(random_point(rng));
  }
  const double dtheta = std::numbers::pi / g;
  auto grid_point = [&](std::size_t idx) {
    if (!full_grid) return sampled[idx];
    std::vector<double> x(dim);
    for (int l = levels - 1; l >= 0; --l) {
      const std::size_t cell = idx % per_level;
      idx /= per_level;
      const auto i = static_cast<double>(cell / (2 * static_cast<std::size_t>(g)));
      const auto j = static_cast<double>(cell % (2 * static_cast<std::size_t>(g)));
      x[2 * static_cast<std::size_t>(l)] = -std::numbers::pi / 2 + (i + 0.5) * dtheta;
      x[2 * static_cast<std::size_t>(l) + 1] = (j + 0.5) * dtheta;
    }
    return x;
  };

  std::vector<double> grid_values(grid_total);
  const long long gt = static_cast<long long>(grid_total);
#pragma omp parallel for schedule(static) if (parallel)
  for (long long i = 0; i < gt; ++i) grid_values[static_cast<std::size_t>(i)] = f(grid_point(static_cast<std::size_t>(i)));

  // Refinement starts: best grid cells, then random points.
  const std::size_t grid_seeds = std::min<std::size_t>(grid_total, (static_cast<std::size_t>(cfg.restarts) + 1) / 2);
  std::vector<std::size_t> order(grid_total);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(grid_seeds), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return grid_values[a] != grid_values[b] ? grid_values[a] > grid_values[b] : a < b;
                    });
  std::vector<std::vector<double>> starts;
  for (std::size_t i = 0; i < grid_seeds; ++i) starts.push_back(grid_point(order[i]));
  while (starts.size() < static_cast<std::size_t>(cfg.restarts)) starts.push_back(random_point(rng));

  std::vector<NelderMeadResult> runs(starts.size());
  const long long ns = static_cast<long long>(starts.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long long s = 0; s < ns; ++s)
    runs[static_cast<std::size_t>(s)] =
        nelder_mead_maximize(f, starts[static_cast<std::size_t>(s)], dtheta / 2, cfg.local_tol, cfg.max_iters);

  ViolationResult res;
  res.method = Method::formula;
  res.evaluations = static_cast<long>(grid_total);
  std::size_t best = 0;
  std::vector<double> values;
  for (std::size_t s = 0; s < runs.size(); ++s) {
    res.evaluations += runs[s].evaluations;
    values.push_back(runs[s].value);
    if (runs[s].value > runs[best].value) best = s;
  }
  // Grid points can beat a refinement that wandered off.
  if (grid_values[order[0]] > runs[best].value) {
    runs[best].value = grid_values[order[0]];
    runs[best].x = grid_point(order[0]);
  }
  res.value = runs[best].value;
  res.argmax_b = angles_to_units(runs[best].x);
  res.argmax_settings = objective.settings(res.argmax_b);
  const double stable = std::max(10.0 * cfg.local_tol, 1e-12);
  res.converged = res.value == 0.0 || runs.size() == 1 || count_near_best(values, res.value, stable) >= 2;
  return res;
}

double mean_value(const DensityMatrix& rho, const BellOperatorSpec& spec, const MeasurementSettings& s) {
  return trace_product(rho.matrix(), operator_matrix(spec, s)).real();
}

ViolationResult oracle_max_violation(const DensityMatrix& rho, const BellOperatorSpec& spec,
                                     const OptimizerConfig& cfg) {
  if (spec.n_qubits != rho.n_qubits())
    throw IncompatibleError("operator acts on " + std::to_string(spec.n_qubits) + " qubits, state has " +
                            std::to_string(rho.n_qubits()));
  cfg.check();
  const int n = rho.n_qubits();
  const auto terms = operator_terms(spec);
  auto evaluate = [&](const MeasurementSettings& s) {
    return trace_product(rho.matrix(), terms_matrix(terms, s)).real();
  };

  struct Run {
    MeasurementSettings settings;
    double value = 0.0;
    long evaluations = 0;
  };
  std::vector<Run> runs(static_cast<std::size_t>(cfg.restarts));
  const long long nr = cfg.restarts;

#pragma omp parallel for schedule(dynamic) if (cfg.exec == Execution::parallel)
  for (long long r = 0; r < nr; ++r) {
    std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(r) + 1)));
    std::normal_distribution<double> gauss;
    auto random_unit = [&] {
      RealVec3 v{};
      double len = 0.0;
      while (len < 1e-6) {
        v = {gauss(rng), gauss(rng), gauss(rng)};
        len = norm(v);
      }
      return (1.0 / len) * v;
    };
    Run run;
    run.settings.a.resize(static_cast<std::size_t>(n));
    run.settings.a_prime.resize(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      run.settings.a[static_cast<std::size_t>(q)] = random_unit();
      run.settings.a_prime[static_cast<std::size_t>(q)] = random_unit();
    }
    double current = evaluate(run.settings);
    ++run.evaluations;
    for (int sweep = 0; sweep < cfg.max_iters; ++sweep) {
      const double before = current;
      for (int q = 0; q < n; ++q) {
        for (auto* dirs : {&run.settings.a, &run.settings.a_prime}) {
          RealVec3& v = (*dirs)[static_cast<std::size_t>(q)];
          const RealVec3 keep = v;
          // <B> is affine in v: <B>(v) = <g, v> + c.
          v = {1, 0, 0};
          const double fx = evaluate(run.settings);
          v = {-1, 0, 0};
          const double fmx = evaluate(run.settings);
          v = {0, 1, 0};
          const double fy = evaluate(run.settings);
          v = {0, 0, 1};
          const double fz = evaluate(run.settings);
          run.evaluations += 4;
          const double c = 0.5 * (fx + fmx);
          const RealVec3 grad{fx - c, fy - c, fz - c};
          const double len = norm(grad);
          if (len > 1e-300) {
            v = (1.0 / len) * grad;
            current = c + len;
          } else {
            v = keep;
          }
        }
      }
      if (current - before < cfg.local_tol) break;
    }
    run.value = evaluate(run.settings);
    ++run.evaluations;
    runs[static_cast<std::size_t>(r)] = std::move(run);
  }

  ViolationResult res;
  res.method = Method::oracle;
  std::size_t best = 0;
  std::vector<double> values;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    res.evaluations += runs[r].evaluations;
    values.push_back(runs[r].value);
    if (runs[r].value > runs[best].value) best = r;
  }
  // The operator is odd under a_1, a'_1 -> -a_1, -a'_1, so max <B> = max |<B>|.
  res.value = std::abs(runs[best].value);
  res.argmax_settings = runs[best].settings;
  res.converged = runs.size() == 1 || count_near_best(values, runs[best].value, 1e-6) >= 2;
  return res;
}

StateFamily parse_family(std::string_view name) {
  if (name == "w-ghz-mix") return StateFamily::w_ghz_mix;
  if (name == "w4-white-noise") return StateFamily::w4_white_noise;
  throw ParseError("unknown state family '" + std::string(name) + "'");
}

std::string_view family_name(StateFamily family) {
  return family == StateFamily::w_ghz_mix ? "w-ghz-mix" : "w4-white-noise";
}

DensityMatrix family_state(StateFamily family, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("family parameter must lie in [0, 1]");
  switch (family) {
    case StateFamily::w_ghz_mix: {
      const WeightedState parts[] = {{x, make_w(3)}, {1.0 - x, make_generalized_ghz(3, std::numbers::pi / 4)}};
      return mix(parts);
    }
    case StateFamily::w4_white_noise: {
      const WeightedState parts[] = {{x, maximally_mixed(4)}, {1.0 - x, make_w(4)}};
      return mix(parts);
    }
  }
  throw std::invalid_argument("unknown family");
}

std::vector<SweepPoint> sweep(StateFamily family, const BellOperatorSpec& spec, const OptimizerConfig& cfg,
                              std::span<const double> xs) {
  std::vector<SweepPoint> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back({x, max_violation_formula(family_state(family, x), spec, cfg).value});
  return out;
}

std::vector<double> crossings(std::span<const SweepPoint> points, double threshold,
                              const std::function<double(double)>& refine, double x_tol) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const bool above_lo = points[i].value > threshold;
    const bool above_hi = points[i + 1].value > threshold;
    if (above_lo == above_hi) continue;
    double lo = points[i].x, hi = points[i + 1].x;
    if (refine) {
      while (hi - lo > x_tol) {
        const double mid = 0.5 * (lo + hi);
        if ((refine(mid) > threshold) == above_lo) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    } else {
      const double flo = points[i].value, fhi = points[i + 1].value;
      out.push_back(lo + (threshold - flo) * (hi - lo) / (fhi - flo));
    }
  }
  return out;
}

std::vector<double> unit_grid(int points) {
  if (points < 2) throw std::invalid_argument("need at least two sweep points");
  std::vector<double> xs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) xs[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
  return xs;
}

std::vector<double> family_crossings(StateFamily family, const BellOperatorSpec& spec, const OptimizerConfig& cfg,
                                     std::span<const SweepPoint> points, double threshold) {
  return crossings(points, threshold, [&](double x) {
    return max_violation_formula(family_state(family, x), spec, cfg).value;
  }, 1e-5);
}

}  // namespace bellviol
