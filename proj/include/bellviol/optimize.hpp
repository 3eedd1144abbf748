#pragma once

#include <functional>
#include <span>
#include <vector>

namespace bellviol {

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  long evaluations = 0;
};

// Derivative-free maximization. Restarts the simplex around the incumbent
// until a restart no longer improves by more than `tol`; each simplex stops
// when its value spread falls below `tol` or after `max_iters` iterations.
NelderMeadResult nelder_mead_maximize(const std::function<double(std::span<const double>)>& f,
                                      std::vector<double> start, double step, double tol, int max_iters);

}  // namespace bellviol
