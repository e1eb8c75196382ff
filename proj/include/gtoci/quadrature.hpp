#pragma once

#include <functional>
#include <vector>

namespace gtoci::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for int exp(-x^2) f(x) dx, exact to degree 2n-1.
Rule gauss_hermite(int n);
/// Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

/// Adaptive double-exponential quadrature on [0, inf); tolerates integrable
/// endpoint singularities at 0.  Throws ConvergenceError above rel_tol.
double integrate_half_line(const std::function<double(double)>& f, double rel_tol = 1e-14);

/// Adaptive Gauss-Kronrod on [a, b].
double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-13);

}  // namespace gtoci::quad
