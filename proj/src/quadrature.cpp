#include "spinforce/quadrature.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "spinforce/errors.hpp"

namespace spinforce {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton iteration
// on the Legendre recurrence (converges to machine precision in a few steps).
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule make_gauss_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-based initial guess for the i-th root.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const GaussRule& coarse_rule() {
  static const GaussRule r = make_gauss_rule(6);
  return r;
}

const GaussRule& fine_rule() {
  static const GaussRule r = make_gauss_rule(12);
  return r;
}

constexpr int kMaxDim = 3;

struct Cell {
  double lo[kMaxDim];
  double hi[kMaxDim];
  double value = 0.0;
  double error = 0.0;
  std::uint64_t id = 0;  // insertion order, deterministic tie-break
};

struct CellWorse {
  bool operator()(const Cell& a, const Cell& b) const {
    if (a.error != b.error) return a.error < b.error;
    return a.id > b.id;
  }
};

double tensor_estimate(const std::function<double(const double*)>& f,
                       const Cell& cell, int dim, const GaussRule& rule) {
  const int n = static_cast<int>(rule.nodes.size());
  double mid[kMaxDim], half[kMaxDim];
  double jac = 1.0;
  for (int d = 0; d < dim; ++d) {
    mid[d] = 0.5 * (cell.lo[d] + cell.hi[d]);
    half[d] = 0.5 * (cell.hi[d] - cell.lo[d]);
    jac *= half[d];
  }
  KahanSum sum;
  double x[kMaxDim];
  if (dim == 1) {
    for (int i = 0; i < n; ++i) {
      x[0] = mid[0] + half[0] * rule.nodes[i];
      sum.add(rule.weights[i] * f(x));
    }
  } else if (dim == 2) {
    for (int i = 0; i < n; ++i) {
      x[0] = mid[0] + half[0] * rule.nodes[i];
      for (int j = 0; j < n; ++j) {
        x[1] = mid[1] + half[1] * rule.nodes[j];
        sum.add(rule.weights[i] * rule.weights[j] * f(x));
      }
    }
  } else {
    for (int i = 0; i < n; ++i) {
      x[0] = mid[0] + half[0] * rule.nodes[i];
      for (int j = 0; j < n; ++j) {
        x[1] = mid[1] + half[1] * rule.nodes[j];
        const double wij = rule.weights[i] * rule.weights[j];
        for (int k = 0; k < n; ++k) {
          x[2] = mid[2] + half[2] * rule.nodes[k];
          sum.add(wij * rule.weights[k] * f(x));
        }
      }
    }
  }
  return jac * sum.value();
}

void estimate_cell(const std::function<double(const double*)>& f, Cell& cell,
                   int dim) {
  const double coarse = tensor_estimate(f, cell, dim, coarse_rule());
  const double fine = tensor_estimate(f, cell, dim, fine_rule());
  cell.value = fine;
  cell.error = std::abs(fine - coarse);
}

}  // namespace

QuadratureResult integrate_adaptive(
    const std::function<double(const double*)>& f, const double* lo,
    const double* hi, int dim, const QuadratureOptions& opt) {
  if (dim < 1 || dim > kMaxDim) throw DomainError("quadrature: dim must be 1..3");
  if (!(opt.rel_tol > 0.0) || opt.rel_tol > 1e-2) {
    throw DomainError("quadrature: rel_tol must lie in (0, 1e-2]");
  }
  if (opt.max_cells < 1) throw DomainError("quadrature: max_cells must be >= 1");
  double extent[kMaxDim];
  for (int d = 0; d < dim; ++d) {
    if (!(hi[d] > lo[d])) throw DomainError("quadrature: empty integration box");
    extent[d] = hi[d] - lo[d];
  }

  std::uint64_t next_id = 0;
  Cell root;
  for (int d = 0; d < dim; ++d) {
    root.lo[d] = lo[d];
    root.hi[d] = hi[d];
  }
  root.id = next_id++;
  estimate_cell(f, root, dim);

  std::priority_queue<Cell, std::vector<Cell>, CellWorse> heap;
  heap.push(root);
  double total_value = root.value;
  double total_error = root.error;
  int cells = 1;

  while (total_error > opt.rel_tol * std::abs(total_value)) {
    if (total_error == 0.0) break;
    if (cells >= opt.max_cells) {
      throw ConvergenceError(
          "quadrature: cell budget exhausted before reaching tolerance",
          total_value, total_error);
    }
    Cell worst = heap.top();
    heap.pop();
    total_value -= worst.value;
    total_error -= worst.error;

    // Split along the relatively longest axis (scale-free comparison).
    int axis = 0;
    double best = -1.0;
    for (int d = 0; d < dim; ++d) {
      const double rel = (worst.hi[d] - worst.lo[d]) / extent[d];
      if (rel > best) {
        best = rel;
        axis = d;
      }
    }
    const double mid = 0.5 * (worst.lo[axis] + worst.hi[axis]);
    Cell left = worst, right = worst;
    left.hi[axis] = mid;
    right.lo[axis] = mid;
    left.id = next_id++;
    right.id = next_id++;
    estimate_cell(f, left, dim);
    estimate_cell(f, right, dim);
    heap.push(left);
    heap.push(right);
    total_value += left.value + right.value;
    total_error += left.error + right.error;
    ++cells;

    // Refresh the running sums periodically to shed cancellation drift.
    if ((cells & 0x3ff) == 0) {
      std::vector<Cell> live;
      live.reserve(heap.size());
      while (!heap.empty()) {
        live.push_back(heap.top());
        heap.pop();
      }
      KahanSum v, e;
      for (const Cell& c : live) {
        v.add(c.value);
        e.add(c.error);
      }
      total_value = v.value();
      total_error = e.value();
      for (Cell& c : live) heap.push(c);
    }
  }

  QuadratureResult result;
  result.value = total_value;
  result.abs_error = total_error;
  result.cells = cells;
  return result;
}

}  // namespace spinforce
