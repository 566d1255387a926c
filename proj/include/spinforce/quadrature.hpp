#pragma once

#include <functional>

namespace spinforce {

struct QuadratureOptions {
  double rel_tol = 1e-7;  // relative error target, (0, 1e-2]
  int max_cells = 60000;  // adaptive subdivision budget
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;  // estimated absolute error bound
  int cells = 0;           // cells in the final partition
};

// Adaptive integration of f over the axis-aligned box [lo, hi] in `dim`
// dimensions (dim = 1, 2 or 3). Each cell is estimated with an embedded pair
// of tensor Gauss-Legendre rules; the cell with the largest error estimate is
// bisected along its relatively longest axis until the summed error estimate
// drops below rel_tol * |integral|. Deterministic for fixed inputs.
//
// Throws ConvergenceError (carrying the best estimate and its error bound)
// when the cell budget is exhausted first.
QuadratureResult integrate_adaptive(
    const std::function<double(const double*)>& f, const double* lo,
    const double* hi, int dim, const QuadratureOptions& opt = {});

// Compensated (Kahan) accumulator used by the integrators.
class KahanSum {
 public:
  void add(double x) {
    double y = x - carry_;
    double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace spinforce
