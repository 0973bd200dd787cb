#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "ldrank/errors.hpp"
#include "ldrank/prob.hpp"

namespace ldrank {

struct PowerIterationResult {
  std::vector<double> x;  // fixed point: ‖op(x) − x‖₁ < tol
  int iterations = 0;
  double residual = 0.0;
};

// Fixed point of op on the probability simplex. The operator must preserve
// the simplex (caller's contract); each iterate is renormalized in L1 to
// absorb rounding drift. Returns the first x with ‖op(x) − x‖₁ < tol.
template <typename Op>
PowerIterationResult power_iteration(Op&& op, const ProbVector& start, double tol, int max_iter) {
  if (tol <= 0.0 || max_iter < 1)
    throw InputError("power iteration tolerance and iteration budget must be positive");
  std::vector<double> x = start.values();
  for (int it = 1; it <= max_iter; ++it) {
    std::vector<double> y = op(x);
    if (y.size() != x.size()) throw InputError("operator changed the vector length");
    double sum = 0.0;
    for (double v : y) sum += std::abs(v);
    if (!(sum > 0.0)) throw InputError("operator produced a zero or non-finite vector");
    double delta = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] /= sum;
      delta += std::abs(y[i] - x[i]);
    }
    if (delta < tol) return {std::move(x), it, delta};
    x = std::move(y);
  }
  throw ConvergenceError("power iteration did not converge within " + std::to_string(max_iter) +
                             " iterations",
                         max_iter);
}

}  // namespace ldrank
