#include "gtoci/quadrature.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gtoci/errors.hpp"

namespace gtoci::quad {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights come from
// the first eigenvector components.
Rule golub_welsch(const Eigen::VectorXd& offdiag, double mu0) {
  const auto n = offdiag.size() + 1;
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    jacobi(i, i + 1) = offdiag(i);
    jacobi(i + 1, i) = offdiag(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  Rule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

// Newton polish of the Hermite nodes with the three-term recurrence; the
// weights are recomputed from H'_n so small tail weights keep full relative
// accuracy.
void polish_hermite(Rule& rule, int n) {
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    double x = rule.nodes[j];
    double dp = 0.0;
    for (int it = 0; it < 6; ++it) {
      // orthonormal Hermite recurrence
      double p0 = std::pow(std::numbers::pi, -0.25);
      double p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = x * std::sqrt(2.0 / k) * p1 - std::sqrt((k - 1.0) / k) * p2;
      }
      dp = std::sqrt(2.0 * n) * p1;
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    rule.nodes[j] = x;
    rule.weights[j] = 2.0 / (dp * dp);
  }
}

}  // namespace

Rule gauss_hermite(int n) {
  if (n < 1) throw InvalidParameter("gauss_hermite: n must be >= 1");
  if (n == 1) return Rule{{0.0}, {std::sqrt(std::numbers::pi)}};
  Eigen::VectorXd off(n - 1);
  for (int i = 1; i < n; ++i) off(i - 1) = std::sqrt(i / 2.0);
  Rule rule = golub_welsch(off, std::sqrt(std::numbers::pi));
  polish_hermite(rule, n);
  return rule;
}

Rule gauss_legendre(int n) {
  if (n < 1) throw InvalidParameter("gauss_legendre: n must be >= 1");
  if (n == 1) return Rule{{0.0}, {2.0}};
  Eigen::VectorXd off(n - 1);
  for (int i = 1; i < n; ++i) off(i - 1) = i / std::sqrt(4.0 * i * i - 1.0);
  return golub_welsch(off, 2.0);
}

double integrate_half_line(const std::function<double(double)>& f, double rel_tol) {
  boost::math::quadrature::exp_sinh<double> integrator(12);
  double error = 0.0;
  double l1 = 0.0;
  const double value = integrator.integrate(f, rel_tol, &error, &l1);
  if (!(error <= std::max(rel_tol * 100.0, 1e-12) * std::max(std::abs(value), 1e-300) ||
        error <= 1e-300)) {
    std::ostringstream msg;
    msg << "integrate_half_line: estimated error " << error << " for value " << value;
    throw ConvergenceError(msg.str());
  }
  return value;
}

double integrate_interval(const std::function<double(double)>& f, double a, double b,
                          double rel_tol) {
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 30, rel_tol, &error);
  return value;
}

}  // namespace gtoci::quad
