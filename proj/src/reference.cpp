#include "gtoci/reference.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include "gtoci/ci.hpp"
#include "gtoci/errors.hpp"
#include "gtoci/special_functions.hpp"

namespace gtoci {

double RadialProblem::potential_at(double r) const {
  double v = morse_value(morse, r);
  if (potential == RadialPotential::trapped_morse) v += 0.5 * mu * units::omega * units::omega * r * r;
  if (ell != 0) v += units::hbar * units::hbar * ell * (ell + 1) / (2.0 * mu * r * r);
  return v;
}

void RadialProblem::validate() const {
  morse.validate();
  if (ell < 0) throw InvalidParameter("partial wave must be non-negative");
  if (n_points < 5000) throw InvalidParameter("radial grid needs at least 5000 points");
  if (!(mu > 0.0)) throw InvalidParameter("reduced mass must be positive");
  if (potential == RadialPotential::trapped_morse && r_max < 10.0 * units::d_ho)
    throw InvalidParameter("trapped radial grid must extend to at least 10 d_ho");
  if (!(r_max > morse.r_min)) throw InvalidParameter("radial grid ends inside the Morse minimum");
}

namespace {

struct Tridiagonal {
  double step = 0.0;
  std::vector<double> diag;
  std::vector<double> off;
};

Tridiagonal discretize(const RadialProblem& p, int n) {
  Tridiagonal t;
  t.step = p.r_max / (n + 1);
  const double kinetic = units::hbar * units::hbar / (2.0 * p.mu * t.step * t.step);
  t.diag.resize(static_cast<std::size_t>(n));
  t.off.assign(static_cast<std::size_t>(n), -kinetic);
  for (int i = 0; i < n; ++i) t.diag[i] = 2.0 * kinetic + p.potential_at((i + 1) * t.step);
  return t;
}

std::vector<double> lowest_eigenvalues(Tridiagonal t, int count, std::vector<double>* vector) {
  const auto n = static_cast<lapack_int>(t.diag.size());
  lapack_int found = 0;
  std::vector<double> w(t.diag.size());
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  if (vector) vector->assign(t.diag.size() * static_cast<std::size_t>(count), 0.0);
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, vector ? 'V' : 'N', 'I', n, t.diag.data(), t.off.data(), 0.0, 0.0, 1, count,
                     0.0, &found, w.data(), vector ? vector->data() : nullptr, n, support.data());
  if (info != 0 || found != count) {
    std::ostringstream msg;
    msg << "dstevr failed (info = " << info << ", " << found << " of " << count << " eigenvalues)";
    throw SolverError(msg.str());
  }
  w.resize(static_cast<std::size_t>(count));
  return w;
}

}  // namespace

std::vector<double> radial_spectrum(const RadialProblem& problem, int n_states, double tolerance) {
  problem.validate();
  if (n_states < 1) throw InvalidParameter("n_states must be positive");
  const int n = problem.n_points;
  const auto e1 = lowest_eigenvalues(discretize(problem, n), n_states, nullptr);
  const auto e2 = lowest_eigenvalues(discretize(problem, 2 * n + 1), n_states, nullptr);
  const auto e4 = lowest_eigenvalues(discretize(problem, 4 * n + 3), n_states, nullptr);
  std::vector<double> out(static_cast<std::size_t>(n_states));
  for (int k = 0; k < n_states; ++k) {
    const double coarse = (4.0 * e2[k] - e1[k]) / 3.0;
    const double fine = (4.0 * e4[k] - e2[k]) / 3.0;
    if (std::abs(fine - coarse) > tolerance) {
      std::ostringstream msg;
      msg << "radial spectrum (l = " << problem.ell << ", state " << k << ") not converged: extrapolants differ by "
          << std::abs(fine - coarse) << ", observed order " << std::log2(std::abs((e1[k] - e2[k]) / (e2[k] - e4[k])));
      throw ConvergenceError(msg.str());
    }
    out[k] = units::energy_to_hw(fine);
  }
  return out;
}

double RadialWavefunction::radial_part(double r) const {
  if (r < 0.0) r = -r;
  const auto last = u.size() - 1;
  if (r >= last * step) return 0.0;
  if (r < step) {
    const double slope = (4.0 * u[1] - u[2]) / (2.0 * step);
    const double f = r / step;
    return (1.0 - f) * slope + f * u[1] / step;
  }
  const double x = r / step;
  const auto i = static_cast<std::size_t>(x);
  const double f = x - i;
  return ((1.0 - f) * u[i] + f * u[i + 1]) / r;
}

RadialWavefunction radial_wavefunction(const RadialProblem& problem, int state) {
  problem.validate();
  if (state < 0) throw InvalidParameter("state index must be non-negative");
  const auto t = discretize(problem, problem.n_points);
  std::vector<double> vecs;
  const auto w = lowest_eigenvalues(t, state + 1, &vecs);
  const auto n = t.diag.size();
  RadialWavefunction out;
  out.step = t.step;
  out.energy = units::energy_to_hw(w[state]);
  out.u.assign(n + 2, 0.0);
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out.u[i + 1] = vecs[state * n + i];
    norm += out.u[i + 1] * out.u[i + 1];
  }
  norm = std::sqrt(norm * t.step);
  std::size_t first = 1;
  while (first + 1 < n + 1 && std::abs(out.u[first + 1]) >= std::abs(out.u[first])) ++first;
  const double sign = out.u[first] < 0.0 ? -1.0 : 1.0;
  for (auto& v : out.u) v *= sign / norm;
  return out;
}

namespace {

struct ZeroEnergy {
  double as = 0.0;
  double indicator = 0.0;
  int nodes = 0;
  double r1 = 0.0;
  double r2 = 0.0;
};

ZeroEnergy integrate_zero_energy(const MorseParams& m, double r1_target, double r2, double step) {
  const double mu = units::reduced_mass;
  const int steps = static_cast<int>(std::ceil(r2 / step));
  const double h = r2 / steps;
  const int i1 = static_cast<int>(std::lround(r1_target / h));
  const auto k = [&](double r) { return 2.0 * mu * morse_value(m, r) / (units::hbar * units::hbar); };
  const double c = h * h / 12.0;
  double prev = 0.0;
  double cur = h + k(0.0) * h * h * h / 6.0;
  double k_prev = k(0.0);
  double k_cur = k(h);
  ZeroEnergy out;
  double u1 = 0.0;
  for (int i = 1; i < steps; ++i) {
    const double r_next = (i + 1) * h;
    const double k_next = k(r_next);
    const double next = (2.0 * (1.0 + 5.0 * c * k_cur) * cur - (1.0 - c * k_prev) * prev) / (1.0 - c * k_next);
    if ((next < 0.0) != (cur < 0.0) && next != 0.0) ++out.nodes;
    prev = cur;
    cur = next;
    k_prev = k_cur;
    k_cur = k_next;
    if (i + 1 == i1) u1 = cur;
    const double scale = std::abs(cur);
    if (scale > 1e100) {
      prev /= scale;
      cur /= scale;
      u1 /= scale;
    }
  }
  out.r1 = i1 * h;
  out.r2 = r2;
  const double slope = (cur - u1) / (out.r2 - out.r1);
  out.as = out.r1 - u1 / slope;
  out.indicator = slope / std::hypot(u1, slope);
  return out;
}

}  // namespace

ScatteringResult scattering_length(const MorseParams& morse, const ScatteringOptions& options) {
  morse.validate();
  if (!(options.step > 0.0) || !(options.match_spacing > 0.0))
    throw InvalidParameter("scattering step and matching spacing must be positive");
  const double r1 = morse.r_min + options.match_offset / morse.stiffness;
  const double r2 = r1 + options.match_spacing;
  if (2.0 * units::reduced_mass * std::abs(morse_value(morse, r1)) * r1 * r1 > 1e-10) {
    std::ostringstream msg;
    msg << "matching radius " << units::length_to_dho(r1) << " d_ho lies inside the Morse range";
    throw InvalidParameter(msg.str());
  }
  if (morse.depth == 0.0) {
    ScatteringResult res;
    res.pole_indicator = 1.0;
    res.matching_radius_dho = units::length_to_dho(r1);
    return res;
  }
  const auto coarse = integrate_zero_energy(morse, r1, r2, options.step);
  const auto fine = integrate_zero_energy(morse, r1, r2, options.step / 2.0);
  ScatteringResult res;
  res.depth_hw = units::energy_to_hw(morse.depth);
  const double as = (16.0 * fine.as - coarse.as) / 15.0;
  res.as_dho = units::length_to_dho(as);
  res.pole_indicator = fine.indicator;
  res.matching_radius_dho = units::length_to_dho(fine.r1);
  res.near_pole = std::abs(res.as_dho) > options.pole_threshold;
  res.converged = res.near_pole || std::abs(fine.as - coarse.as) <= 1e-6 * std::max(1.0, std::abs(as));
  res.bound_states = fine.nodes + (as > fine.r2 ? 1 : 0);
  return res;
}

PoleSearch pole_positions(const MorseParams& morse, double lo_hw, double hi_hw, int count, double scan_step,
                          double tolerance, const ScatteringOptions& options) {
  if (!(hi_hw > lo_hw) || lo_hw < 0.0) throw InvalidParameter("pole search needs 0 <= lo < hi");
  if (!(scan_step > 0.0) || !(tolerance > 0.0)) throw InvalidParameter("scan step and tolerance must be positive");
  const auto indicator = [&](double d) { return scattering_length(morse.with_depth(d), options).pole_indicator; };
  PoleSearch out;
  const int intervals = static_cast<int>(std::ceil((hi_hw - lo_hw) / scan_step));
  double a = lo_hw;
  double fa = indicator(a);
  for (int i = 1; i <= intervals && static_cast<int>(out.poles_hw.size()) < count; ++i) {
    const double b = lo_hw + (hi_hw - lo_hw) * i / intervals;
    const double fb = indicator(b);
    if ((fa < 0.0) != (fb < 0.0)) {
      double x0 = a, x1 = b, f0 = fa;
      while (x1 - x0 > tolerance) {
        const double mid = 0.5 * (x0 + x1);
        const double fm = indicator(mid);
        if ((fm < 0.0) == (f0 < 0.0)) {
          x0 = mid;
          f0 = fm;
        } else {
          x1 = mid;
        }
      }
      out.poles_hw.push_back(0.5 * (x0 + x1));
    }
    a = b;
    fa = fb;
  }
  if (out.poles_hw.empty()) {
    std::ostringstream msg;
    msg << "no sign change of 1/a_s in [" << lo_hw << ", " << hi_hw << "] hbar*omega";
    out.diagnostic = msg.str();
  }
  return out;
}

const ReferenceLevel& ReferenceResult::find(const std::string& label) const {
  for (const auto& l : levels)
    if (l.label == label) return l;
  std::ostringstream msg;
  msg << "unknown reference state '" << label << "'; available:";
  for (const auto& s : labels()) msg << ' ' << s;
  throw InvalidParameter(msg.str());
}

std::vector<std::string> ReferenceResult::labels() const {
  std::vector<std::string> out;
  for (const auto& l : levels)
    if (!l.label.empty()) out.push_back(l.label);
  return out;
}

ReferenceResult compose_totals(const std::map<int, std::vector<double>>& relative, int n_com_max) {
  if (n_com_max < 0) throw InvalidParameter("n_com_max must be non-negative");
  ReferenceResult res;
  res.relative = relative;
  for (const auto& [ell, energies] : relative) {
    for (std::size_t n = 0; n < energies.size(); ++n) {
      for (int big_n = 0; big_n <= n_com_max; ++big_n) {
        for (int l = big_n; l >= 0; l -= 2) {
          for (int total = std::abs(ell - l); total <= ell + l; ++total) {
            ReferenceLevel lv;
            lv.L = total;
            lv.parity = (ell + l) % 2 == 0 ? 1 : -1;
            lv.energy = energies[n] + big_n + 1.5;
            lv.rel_n = static_cast<int>(n);
            lv.rel_ell = ell;
            lv.com_n = big_n;
            lv.com_l = l;
            res.levels.push_back(lv);
          }
        }
      }
    }
  }
  std::stable_sort(res.levels.begin(), res.levels.end(), [](const auto& a, const auto& b) {
    return std::tie(a.energy, a.L) < std::tie(b.energy, b.L);
  });
  struct Tag {
    const char* label;
    int rel_n, rel_ell, com_n, com_l, L;
  };
  static constexpr Tag tags[] = {{"MGS", 0, 0, 0, 0, 0}, {"MS1", 0, 0, 1, 1, 1}, {"MS2", 0, 0, 2, 0, 0},
                                 {"MS2_L2", 0, 0, 2, 2, 2}, {"TS1", 1, 0, 0, 0, 0}, {"TS2", 1, 0, 1, 1, 1},
                                 {"TS3", 0, 2, 0, 0, 2}};
  for (const auto& t : tags)
    for (auto& lv : res.levels)
      if (lv.rel_n == t.rel_n && lv.rel_ell == t.rel_ell && lv.com_n == t.com_n && lv.com_l == t.com_l &&
          lv.L == t.L)
        lv.label = t.label;
  return res;
}

ReferenceResult reference_spectrum(const MorseParams& morse, const ReferenceOptions& options) {
  std::map<int, std::vector<double>> rel;
  const std::pair<int, int> waves[] = {{0, options.s_states}, {2, options.d_states}, {4, options.g_states}};
  for (const auto& [ell, count] : waves) {
    if (count <= 0) continue;
    RadialProblem p;
    p.ell = ell;
    p.morse = morse;
    p.r_max = options.r_max;
    p.n_points = options.n_points;
    rel[ell] = radial_spectrum(p, count);
  }
  return compose_totals(rel, options.n_com_max);
}

namespace {

double generalized_laguerre(int k, double alpha, double x) {
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + alpha - x;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0 + alpha - x) * cur - (j + alpha) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Isotropic-oscillator radial function of mass m, shell N and angular momentum l.
double oscillator_radial(int big_n, int l, double mass, double r) {
  const int k = (big_n - l) / 2;
  const double beta = mass * units::omega / units::hbar;
  const double norm2 = 2.0 * std::pow(beta, l + 1.5) * special::factorial(k) / std::tgamma(k + l + 1.5);
  return std::sqrt(norm2) * std::pow(r, l) * std::exp(-0.5 * beta * r * r) *
         generalized_laguerre(k, l + 0.5, beta * r * r);
}

/// Y_l0 on the z axis, direction sign s.
double axial_harmonic(int l, double s) {
  const double y = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi));
  return (l % 2 == 1 && s < 0.0) ? -y : y;
}

}  // namespace

DensityCut reference_density_cut(const MorseParams& morse, const ReferenceLevel& level, const std::vector<double>& z,
                                 const ReferenceOptions& options) {
  if (level.rel_ell != 0 && level.com_l != 0)
    throw InvalidParameter("reference cuts need an s-wave relative or center-of-mass factor");
  RadialProblem p;
  p.ell = level.rel_ell;
  p.morse = morse;
  p.r_max = options.r_max;
  p.n_points = options.n_points;
  const auto rel = radial_wavefunction(p, level.rel_n);
  DensityCut cut;
  cut.z = z;
  const auto g = static_cast<Eigen::Index>(z.size());
  cut.amplitude.resize(g, g);
  for (Eigen::Index i = 0; i < g; ++i) {
    for (Eigen::Index j = 0; j < g; ++j) {
      const double r = z[i] - z[j];
      const double big_r = 0.5 * (z[i] + z[j]);
      const double psi_rel = rel.radial_part(r) * axial_harmonic(level.rel_ell, r);
      const double psi_com = oscillator_radial(level.com_n, level.com_l, units::total_mass, std::abs(big_r)) *
                             axial_harmonic(level.com_l, big_r);
      cut.amplitude(i, j) = psi_rel * psi_com;
    }
  }
  finish_density_cut(cut);
  return cut;
}

}  // namespace gtoci
