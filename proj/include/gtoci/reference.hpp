#pragma once

#include <map>
#include <string>
#include <vector>

#include "gtoci/basis.hpp"
#include "gtoci/units.hpp"

namespace gtoci {

enum class RadialPotential { trapped_morse, morse_only };

/// -(1/(2 mu)) u'' + [mu r^2 / 2 (trapped) + U(r) + l(l+1)/(2 mu r^2)] u = E u,
/// u(0) = u(r_max) = 0, uniform grid r_i = i h with h = r_max / (n_points + 1).
/// Absolute units.
struct RadialProblem {
  int ell = 0;
  RadialPotential potential = RadialPotential::trapped_morse;
  MorseParams morse{};
  double r_max = 12.0 * units::d_ho;
  int n_points = 20000;
  double mu = units::reduced_mass;

  double potential_at(double r) const;
  void validate() const;
};

/// Lowest n_states eigenvalues (hbar*omega), Richardson-extrapolated from the
/// grids n, 2n+1 and 4n+3 (steps h, h/2, h/4).  Throws ConvergenceError,
/// quoting the observed order, when the two extrapolants differ by more than
/// tolerance.
std::vector<double> radial_spectrum(const RadialProblem& problem, int n_states, double tolerance = 1e-5);

struct RadialWavefunction {
  double step = 0.0;
  /// u at r_i = i * step for i = 0 .. n+1, normalized so sum u^2 h = 1 and
  /// positive at its first extremum.
  std::vector<double> u;
  double energy = 0.0;

  /// u(r) / r, linear in u between grid points; the r -> 0 limit uses the
  /// one-sided derivative.
  double radial_part(double r) const;
};

RadialWavefunction radial_wavefunction(const RadialProblem& problem, int state);

struct ScatteringOptions {
  /// First matching radius r1 = Rm + offset / am; r2 = r1 + spacing.
  double match_offset = 40.0;
  double match_spacing = 1.0;
  double step = 2e-3;
  /// |a_s| above this (d_ho) is reported as near_pole.
  double pole_threshold = 1e4;
};

struct ScatteringResult {
  double depth_hw = 0.0;
  double as_dho = 0.0;
  /// Slope of the zero-energy solution at the matching radius over
  /// hypot(u, u'); changes sign exactly at the poles.
  double pole_indicator = 0.0;
  bool converged = true;
  bool near_pole = false;
  double matching_radius_dho = 0.0;
  /// Nodes of the zero-energy solution on (0, inf), equal to the number of
  /// free-space bound states.
  int bound_states = 0;
};

/// Zero-energy s-wave Numerov integration of u'' = 2 mu U u from u ~ r, with
/// a_s read off the asymptotic line u ~ (r - a_s) through the two matching
/// radii; Richardson-combined over steps h and h/2.
ScatteringResult scattering_length(const MorseParams& morse, const ScatteringOptions& options = {});

struct PoleSearch {
  std::vector<double> poles_hw;
  std::string diagnostic;
};

/// Poles of a_s(De) for the Rm, am of morse inside [lo, hi] (hbar*omega):
/// scan in steps of at most scan_step, then bisect each sign change of the
/// pole indicator to tolerance.  At most count poles are returned.
PoleSearch pole_positions(const MorseParams& morse, double lo_hw, double hi_hw, int count,
                          double scan_step = 0.5, double tolerance = 1e-6, const ScatteringOptions& options = {});

struct ReferenceLevel {
  std::string label;
  int L = 0;
  int parity = 1;
  double energy = 0.0;
  int rel_n = 0;
  int rel_ell = 0;
  int com_n = 0;
  int com_l = 0;
};

/// Relative-plus-center-of-mass composition: every relative level (n, l)
/// combined with every oscillator shell N <= n_com_max of the center of
/// mass, its angular momenta l' in {N, N-2, ...} and all total L in
/// |l - l'| .. l + l'.  Sorted by energy, then L.
struct ReferenceResult {
  std::map<int, std::vector<double>> relative;
  std::vector<ReferenceLevel> levels;

  /// Labelled levels: MGS, MS1, MS2, MS2_L2, TS1, TS2, TS3.
  const ReferenceLevel& find(const std::string& label) const;
  std::vector<std::string> labels() const;
};

ReferenceResult compose_totals(const std::map<int, std::vector<double>>& relative, int n_com_max);

struct ReferenceOptions {
  int n_points = 20000;
  double r_max = 12.0 * units::d_ho;
  int s_states = 4;
  int d_states = 3;
  int g_states = 2;
  int n_com_max = 4;
};

/// Trapped relative spectra for l = 0, 2, 4 composed into totals.
ReferenceResult reference_spectrum(const MorseParams& morse, const ReferenceOptions& options = {});

struct DensityCut;

/// Psi(r1, r2) = psi_rel(r1 - r2) psi_com((r1 + r2)/2) on the z-axis cut of
/// the grid, for the labelled state; same layout and sign convention as the
/// CI cut.
DensityCut reference_density_cut(const MorseParams& morse, const ReferenceLevel& level, const std::vector<double>& z,
                                 const ReferenceOptions& options = {});

}  // namespace gtoci
