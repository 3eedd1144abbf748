#include "bellviol/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bellviol {

namespace {

struct Simplex {
  std::vector<std::vector<double>> pts;
  std::vector<double> vals;  // negated objective; we minimize
};

NelderMeadResult run_simplex(const std::function<double(std::span<const double>)>& f, const std::vector<double>& start,
                             double step, double tol, int max_iters) {
  const std::size_t dim = start.size();
  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    return -f(x);
  };

  Simplex s;
  s.pts.push_back(start);
  for (std::size_t i = 0; i < dim; ++i) {
    auto p = start;
    p[i] += step;
    s.pts.push_back(std::move(p));
  }
  for (const auto& p : s.pts) s.vals.push_back(eval(p));

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), trial(dim), trial2(dim);
  for (int it = 0; it < max_iters; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s.vals[a] < s.vals[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];
    if (s.vals[worst] - s.vals[best] <= tol) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t k = 0; k < dim; ++k)
      for (std::size_t i = 0; i < dim; ++i) centroid[i] += s.pts[order[k]][i] / static_cast<double>(dim);

    auto along = [&](double t, std::vector<double>& out) {
      for (std::size_t i = 0; i < dim; ++i) out[i] = centroid[i] + t * (s.pts[worst][i] - centroid[i]);
    };

    along(-1.0, trial);
    const double fr = eval(trial);
    if (fr < s.vals[best]) {
      along(-2.0, trial2);
      const double fe = eval(trial2);
      if (fe < fr) {
        s.pts[worst] = trial2;
        s.vals[worst] = fe;
      } else {
        s.pts[worst] = trial;
        s.vals[worst] = fr;
      }
      continue;
    }
    if (fr < s.vals[second]) {
      s.pts[worst] = trial;
      s.vals[worst] = fr;
      continue;
    }
    const bool outside = fr < s.vals[worst];
    along(outside ? -0.5 : 0.5, trial2);
    const double fc = eval(trial2);
    if (fc < (outside ? fr : s.vals[worst])) {
      s.pts[worst] = trial2;
      s.vals[worst] = fc;
      continue;
    }
    // Shrink toward the best vertex.
    for (std::size_t k = 0; k <= dim; ++k) {
      if (k == best) continue;
      for (std::size_t i = 0; i < dim; ++i) s.pts[k][i] = s.pts[best][i] + 0.5 * (s.pts[k][i] - s.pts[best][i]);
      s.vals[k] = eval(s.pts[k]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(s.vals.begin(), s.vals.end()) - s.vals.begin());
  res.x = s.pts[best];
  res.value = -s.vals[best];
  return res;
}

}  // namespace

NelderMeadResult nelder_mead_maximize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> start, double step, double tol, int max_iters) {
  NelderMeadResult best = run_simplex(f, start, step, tol, max_iters);
  for (int polish = 0; polish < 8; ++polish) {
    step *= 0.5;
    NelderMeadResult next = run_simplex(f, best.x, step, tol, max_iters);
    next.evaluations += best.evaluations;
    const bool improved = next.value > best.value + tol;
    if (next.value > best.value) {
      best = std::move(next);
    } else {
      best.evaluations = next.evaluations;
    }
    if (!improved) break;
  }
  return best;
}

}  // namespace bellviol
