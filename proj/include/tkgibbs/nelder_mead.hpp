#pragma once

#include <functional>
#include <vector>

namespace tkgibbs {

struct NelderMeadResult {
  std::vector<double> best_x;
  double best_value = 0.0;  // value of the maximized objective
  int iterations = 0;
  bool converged = false;   // value spread fell below tol before the cap
};

// Downhill simplex search maximizing fn, with the standard
// reflection/expansion/contraction/shrink coefficients (1, 2, 0.5, 0.5).
// The initial simplex is x0 plus one vertex per coordinate offset by step.
// Stops when the simplex value spread drops below tol or after max_iters
// iterations.
NelderMeadResult nelder_mead_maximize(const std::function<double(const std::vector<double>&)>& fn,
                                      const std::vector<double>& x0, double step, double tol,
                                      int max_iters);

}  // namespace tkgibbs
