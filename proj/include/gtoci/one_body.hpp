#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gtoci/basis.hpp"

namespace gtoci {

/// McMurchie-Davidson expansion of (x-A)^i (x-B)^j exp(-tau (x-A)^2 - chi (x-B)^2)
/// in Hermite Gaussians Lambda_t(x; p, P):  returns E^{ij}_t for t = 0..i+j.
/// E^{00}_0 carries the Gaussian product prefactor.
std::vector<double> hermite_coeffs(int i, int j, double tau, double chi, double Ax, double Bx);

// Matrix elements between normalized primitives, absolute units.
double overlap(const GtoPrimitive& a, const GtoPrimitive& b);
double kinetic(const GtoPrimitive& a, const GtoPrimitive& b);
double trap_harmonic(const GtoPrimitive& a, const GtoPrimitive& b, double omega);
/// -depth * <a| exp(-|r-C|^2 / (2 width^2)) |b>
double trap_gaussian_well(const GtoPrimitive& a, const GtoPrimitive& b, const GaussianWell& well);
double trap_potential(const GtoPrimitive& a, const GtoPrimitive& b, const TrapParams& trap);

struct OneBodyMatrices {
  Eigen::MatrixXd overlap;
  Eigen::MatrixXd kinetic;
  Eigen::MatrixXd trap;
  /// kinetic + trap
  Eigen::MatrixXd core;
};

OneBodyMatrices one_body_matrices(const BasisSet& basis, const TrapParams& trap);

/// Eigenvalues of the one-particle problem in the span of the basis, from a
/// canonical orthogonalization that drops overlap eigenvalues below
/// lindep * max eigenvalue.
Eigen::VectorXd single_particle_spectrum(const OneBodyMatrices& m, double lindep = 1e-10);

}  // namespace gtoci
