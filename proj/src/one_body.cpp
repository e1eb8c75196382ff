#include "gtoci/one_body.hpp"

#include <cmath>
#include <numbers>

#include "gtoci/errors.hpp"
#include "gtoci/quadrature.hpp"
#include "gtoci/units.hpp"

namespace gtoci {

std::vector<double> hermite_coeffs(int i, int j, double tau, double chi, double Ax, double Bx) {
  if (i < 0 || j < 0) throw InvalidParameter("hermite_coeffs: negative power");
  if (!(tau > 0.0) || !(chi > 0.0)) throw InvalidParameter("hermite_coeffs: exponents must be > 0");
  const double p = tau + chi;
  const double P = (tau * Ax + chi * Bx) / p;
  const double PA = P - Ax;
  const double PB = P - Bx;
  const double one_over_2p = 0.5 / p;
  const int tmax = i + j;
  // e[ii][jj][t], built by raising i first and then j
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(i + 1));
  const auto width = static_cast<std::size_t>(tmax + 2);
  rows[0].assign(width, 0.0);
  rows[0][0] = std::exp(-tau * chi / p * (Ax - Bx) * (Ax - Bx));
  for (int ii = 0; ii < i; ++ii) {
    auto& next = rows[ii + 1];
    next.assign(width, 0.0);
    const auto& cur = rows[ii];
    for (int t = 0; t <= ii + 1; ++t) {
      double v = PA * cur[t] + (t + 1) * cur[t + 1];
      if (t > 0) v += one_over_2p * cur[t - 1];
      next[t] = v;
    }
  }
  std::vector<double> cur = rows[i];
  for (int jj = 0; jj < j; ++jj) {
    std::vector<double> next(width, 0.0);
    for (int t = 0; t <= i + jj + 1; ++t) {
      double v = PB * cur[t] + (t + 1) * cur[t + 1];
      if (t > 0) v += one_over_2p * cur[t - 1];
      next[t] = v;
    }
    cur.swap(next);
  }
  cur.resize(static_cast<std::size_t>(tmax + 1));
  return cur;
}

namespace {

// Unnormalized 1D overlap of (x-A)^i e^{-tau(x-A)^2} and (x-B)^j e^{-chi(x-B)^2}.
double overlap_1d(int i, int j, double tau, double chi, double A, double B) {
  if (i < 0 || j < 0) return 0.0;
  return hermite_coeffs(i, j, tau, chi, A, B)[0] * std::sqrt(std::numbers::pi / (tau + chi));
}

// <i| d^2/dx^2 |j> through the power shift on the ket.
double laplacian_1d(int i, int j, double tau, double chi, double A, double B) {
  double v = -2.0 * chi * (2 * j + 1) * overlap_1d(i, j, tau, chi, A, B) +
             4.0 * chi * chi * overlap_1d(i, j + 2, tau, chi, A, B);
  if (j >= 2) v += j * (j - 1.0) * overlap_1d(i, j - 2, tau, chi, A, B);
  return v;
}

// <i| x^2 |j> with x measured from the origin: x = (x-B) + B.
double second_moment_1d(int i, int j, double tau, double chi, double A, double B) {
  return overlap_1d(i, j + 2, tau, chi, A, B) + 2.0 * B * overlap_1d(i, j + 1, tau, chi, A, B) +
         B * B * overlap_1d(i, j, tau, chi, A, B);
}

// <i| exp(-kappa (x-C)^2) |j>: the three Gaussians combine into one and the
// remaining polynomial of degree i+j is integrated exactly by Gauss-Hermite.
double well_1d(int i, int j, double tau, double chi, double kappa, double A, double B, double C) {
  const double p = tau + chi + kappa;
  const double P = (tau * A + chi * B + kappa * C) / p;
  const double arg = (tau * chi * (A - B) * (A - B) + tau * kappa * (A - C) * (A - C) +
                      chi * kappa * (B - C) * (B - C)) / p;
  const double pref = std::exp(-arg);
  if (pref == 0.0) return 0.0;
  const auto rule = quad::gauss_hermite((i + j) / 2 + 1);
  const double s = 1.0 / std::sqrt(p);
  double sum = 0.0;
  for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
    const double x = P + rule.nodes[n] * s;
    sum += rule.weights[n] * std::pow(x - A, i) * std::pow(x - B, j);
  }
  return pref * s * sum;
}

struct AxisData {
  int i, j;
  double A, B;
};

AxisData axis(const GtoPrimitive& a, const GtoPrimitive& b, int d) {
  return {a.power(d), b.power(d), a.center()[d], b.center()[d]};
}

}  // namespace

double overlap(const GtoPrimitive& a, const GtoPrimitive& b) {
  double v = a.norm() * b.norm();
  for (int d = 0; d < 3; ++d) {
    const auto ax = axis(a, b, d);
    v *= overlap_1d(ax.i, ax.j, a.exponent(), b.exponent(), ax.A, ax.B);
  }
  return v;
}

double kinetic(const GtoPrimitive& a, const GtoPrimitive& b) {
  double s[3];
  double l[3];
  for (int d = 0; d < 3; ++d) {
    const auto ax = axis(a, b, d);
    s[d] = overlap_1d(ax.i, ax.j, a.exponent(), b.exponent(), ax.A, ax.B);
    l[d] = laplacian_1d(ax.i, ax.j, a.exponent(), b.exponent(), ax.A, ax.B);
  }
  const double lap = l[0] * s[1] * s[2] + s[0] * l[1] * s[2] + s[0] * s[1] * l[2];
  return -units::hbar * units::hbar / (2.0 * units::particle_mass) * a.norm() * b.norm() * lap;
}

double trap_harmonic(const GtoPrimitive& a, const GtoPrimitive& b, double omega) {
  double s[3];
  double m[3];
  for (int d = 0; d < 3; ++d) {
    const auto ax = axis(a, b, d);
    s[d] = overlap_1d(ax.i, ax.j, a.exponent(), b.exponent(), ax.A, ax.B);
    m[d] = second_moment_1d(ax.i, ax.j, a.exponent(), b.exponent(), ax.A, ax.B);
  }
  const double r2 = m[0] * s[1] * s[2] + s[0] * m[1] * s[2] + s[0] * s[1] * m[2];
  return 0.5 * units::particle_mass * omega * omega * a.norm() * b.norm() * r2;
}

double trap_gaussian_well(const GtoPrimitive& a, const GtoPrimitive& b, const GaussianWell& well) {
  if (!(well.depth > 0.0) || !(well.width > 0.0)) {
    throw InvalidParameter("Gaussian well needs positive depth and width");
  }
  const double kappa = 1.0 / (2.0 * well.width * well.width);
  double v = -well.depth * a.norm() * b.norm();
  for (int d = 0; d < 3; ++d) {
    const auto ax = axis(a, b, d);
    v *= well_1d(ax.i, ax.j, a.exponent(), b.exponent(), kappa, ax.A, ax.B, well.center[d]);
  }
  return v;
}

double trap_potential(const GtoPrimitive& a, const GtoPrimitive& b, const TrapParams& trap) {
  if (trap.kind == TrapKind::harmonic_isotropic) return trap_harmonic(a, b, trap.omega);
  double v = 0.0;
  for (const auto& w : trap.wells) v += trap_gaussian_well(a, b, w);
  return v;
}

OneBodyMatrices one_body_matrices(const BasisSet& basis, const TrapParams& trap) {
  trap.validate();
  const auto n = static_cast<Eigen::Index>(basis.size());
  OneBodyMatrices m;
  m.overlap.resize(n, n);
  m.kinetic.resize(n, n);
  m.trap.resize(n, n);
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto& a = basis[static_cast<std::size_t>(i)];
      const auto& b = basis[static_cast<std::size_t>(j)];
      m.overlap(i, j) = m.overlap(j, i) = overlap(a, b);
      m.kinetic(i, j) = m.kinetic(j, i) = kinetic(a, b);
      m.trap(i, j) = m.trap(j, i) = trap_potential(a, b, trap);
    }
  }
  m.core = m.kinetic + m.trap;
  return m;
}

Eigen::VectorXd single_particle_spectrum(const OneBodyMatrices& m, double lindep) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.overlap);
  const auto& w = es.eigenvalues();
  const double cutoff = lindep * w.maxCoeff();
  Eigen::Index kept = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) >= cutoff) ++kept;
  Eigen::MatrixXd x(m.overlap.rows(), kept);
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) >= cutoff) x.col(c++) = es.eigenvectors().col(i) / std::sqrt(w(i));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(x.transpose() * m.core * x, Eigen::EigenvaluesOnly);
  return hs.eigenvalues();
}

}  // namespace gtoci
