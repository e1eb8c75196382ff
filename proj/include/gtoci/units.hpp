#pragma once

#include <cmath>
#include <numbers>

// All internal arithmetic uses absolute units hbar = m = omega = 1.  Inputs and
// reports are in trap units: lengths in d_ho = sqrt(hbar / (mu omega)) with
// the reduced mass mu = m/2, energies in hbar*omega.  Under these constants
// d_ho = sqrt(2) and hbar*omega = 1.
namespace gtoci::units {

inline constexpr double hbar = 1.0;
inline constexpr double particle_mass = 1.0;
inline constexpr double omega = 1.0;
inline constexpr double reduced_mass = particle_mass / 2.0;
inline constexpr double total_mass = 2.0 * particle_mass;
inline const double d_ho = std::sqrt(hbar / (reduced_mass * omega));
inline constexpr double hbar_omega = hbar * omega;

/// Ground energy of two non-interacting particles in the isotropic trap.
inline constexpr double noninteracting_ground_energy = 3.0 * hbar_omega;

inline double length_from_dho(double x) { return x * d_ho; }
inline double length_to_dho(double x) { return x / d_ho; }
inline double inverse_length_from_dho(double k) { return k / d_ho; }
inline double inverse_length_to_dho(double k) { return k * d_ho; }
inline constexpr double energy_from_hw(double e) { return e * hbar_omega; }
inline constexpr double energy_to_hw(double e) { return e / hbar_omega; }

/// A two-particle density |Psi(r1, r2)|^2 carries length^-6.
inline double density6_to_dho(double rho) { return rho * std::pow(d_ho, 6); }

}  // namespace gtoci::units
