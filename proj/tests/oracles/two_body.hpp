#pragma once

// Independent oracles for the Morse two-particle integrals.  None of them
// uses the Hermite expansion, the R tensor, or the closed-form S integrals.

#include <omp.h>

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "gtoci/basis.hpp"
#include "test_support.hpp"

namespace oracle {

/// int_0^inf r^lambda U(r) exp(-xi r^2) dr by exp-sinh quadrature.
inline double master(int lambda, double xi, const gtoci::MorseParams& morse) {
  return test_support::half_line(
      [&](double r) { return std::pow(r, lambda) * gtoci::morse_value(morse, r) * std::exp(-xi * r * r); });
}

/// B(|Q|) = (pi/(p+q))^{3/2} int d^3r exp(-xi |r - Q|^2) U(r), angular part done analytically.
inline double b_of_q(double p, double q, double Q, const gtoci::MorseParams& morse) {
  const double xi = p * q / (p + q);
  const double pref = std::pow(std::numbers::pi / (p + q), 1.5) * 4.0 * std::numbers::pi;
  if (Q == 0.0) return pref * master(2, xi, morse);
  const double radial = test_support::half_line([&](double r) {
    if (r == 0.0) return 0.0;
    const double g = 0.5 * (std::exp(-xi * (r - Q) * (r - Q)) - std::exp(-xi * (r + Q) * (r + Q)));
    return r * gtoci::morse_value(morse, r) * g / (2.0 * xi * Q);
  });
  return pref * radial;
}

/// int over the unit sphere of xhat^a yhat^b zhat^c: Gauss-Legendre in cos(theta) times
/// the trapezoid rule in phi, exact for the degrees used here.
inline double sphere_monomial(int a, int b, int c) {
  static const boost::math::quadrature::gauss<double, 20> legendre;
  constexpr int n_phi = 48;
  double sum = 0.0;
  const auto& x = legendre.abscissa();
  const auto& w = legendre.weights();
  auto ring = [&](double ct) {
    const double st = std::sqrt(1.0 - ct * ct);
    double acc = 0.0;
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_phi;
      acc += std::pow(st * std::cos(phi), a) * std::pow(st * std::sin(phi), b);
    }
    return acc * std::pow(ct, c);
  };
  for (std::size_t k = 0; k < x.size(); ++k) {
    sum += w[k] * ring(x[k]);
    if (x[k] != 0.0) sum += w[k] * ring(-x[k]);
  }
  return sum * 2.0 * std::numbers::pi / n_phi;
}

/// Single-center quartet <a b | U | c d> in relative and centre-of-mass
/// coordinates: r1 = X + beta r, r2 = X - alpha r.  The X integral is a
/// Gaussian moment; the r integral is split into a sphere quadrature and an
/// exp-sinh radial quadrature.
inline double relative_coordinate(const gtoci::GtoPrimitive& a, const gtoci::GtoPrimitive& b,
                                  const gtoci::GtoPrimitive& c, const gtoci::GtoPrimitive& d,
                                  const gtoci::MorseParams& morse) {
  const double p = a.exponent() + c.exponent();
  const double q = b.exponent() + d.exponent();
  const double s = p + q;
  const double alpha = p / s;
  const double beta = q / s;
  const double xi = p * q / s;
  auto binom = [](int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); };
  auto gauss_moment = [&](int k) { return k % 2 ? 0.0 : std::tgamma(0.5 * (k + 1)) / std::pow(s, 0.5 * (k + 1)); };

  // per axis: coefficients of x^e after integrating over X
  std::vector<double> axis[3];
  for (int ax = 0; ax < 3; ++ax) {
    const int m = a.power(ax) + c.power(ax);
    const int n = b.power(ax) + d.power(ax);
    axis[ax].assign(static_cast<std::size_t>(m + n + 1), 0.0);
    for (int k = 0; k <= m; ++k)
      for (int l = 0; l <= n; ++l) {
        const double coef = binom(m, k) * binom(n, l) * std::pow(beta, m - k) * std::pow(-alpha, n - l) *
                            gauss_moment(k + l);
        axis[ax][(m - k) + (n - l)] += coef;
      }
  }
  std::map<int, double> radial;
  double total = 0.0;
  for (std::size_t e0 = 0; e0 < axis[0].size(); ++e0)
    for (std::size_t e1 = 0; e1 < axis[1].size(); ++e1)
      for (std::size_t e2 = 0; e2 < axis[2].size(); ++e2) {
        const double coef = axis[0][e0] * axis[1][e1] * axis[2][e2];
        if (coef == 0.0 || e0 % 2 || e1 % 2 || e2 % 2) continue;
        const int deg = static_cast<int>(e0 + e1 + e2);
        auto it = radial.find(deg);
        if (it == radial.end()) it = radial.emplace(deg, master(2 + deg, xi, morse)).first;
        total += coef * sphere_monomial(static_cast<int>(e0), static_cast<int>(e1), static_cast<int>(e2)) * it->second;
      }
  return a.norm() * b.norm() * c.norm() * d.norm() * total;
}

struct McEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// Six-dimensional Monte Carlo with r1, r2 drawn from the normalized
/// Gaussians of the two orbital products.  Chunks have fixed seeds and are
/// combined in order, so the estimate does not depend on the thread count.
inline McEstimate monte_carlo(const gtoci::GtoPrimitive& a, const gtoci::GtoPrimitive& b,
                              const gtoci::GtoPrimitive& c, const gtoci::GtoPrimitive& d,
                              const gtoci::MorseParams& morse, long samples, std::uint64_t seed) {
  const double p = a.exponent() + c.exponent();
  const double q = b.exponent() + d.exponent();
  gtoci::Vec3 P{}, R{};
  for (int k = 0; k < 3; ++k) {
    P[k] = (a.exponent() * a.center()[k] + c.exponent() * c.center()[k]) / p;
    R[k] = (b.exponent() * b.center()[k] + d.exponent() * d.center()[k]) / q;
  }
  const double np = std::pow(p / std::numbers::pi, 1.5);
  const double nq = std::pow(q / std::numbers::pi, 1.5);
  constexpr int chunks = 64;
  const long per_chunk = samples / chunks;
  std::vector<double> sum(chunks, 0.0), sum2(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (int ch = 0; ch < chunks; ++ch) {
    std::mt19937_64 rng(seed * 1000003ULL + static_cast<std::uint64_t>(ch));
    std::normal_distribution<double> n1(0.0, std::sqrt(0.5 / p));
    std::normal_distribution<double> n2(0.0, std::sqrt(0.5 / q));
    double s1 = 0.0, s2 = 0.0;
    for (long i = 0; i < per_chunk; ++i) {
      gtoci::Vec3 d1{n1(rng), n1(rng), n1(rng)};
      gtoci::Vec3 d2{n2(rng), n2(rng), n2(rng)};
      gtoci::Vec3 r1{P[0] + d1[0], P[1] + d1[1], P[2] + d1[2]};
      gtoci::Vec3 r2{R[0] + d2[0], R[1] + d2[1], R[2] + d2[2]};
      const double g1 = np * std::exp(-p * (d1[0] * d1[0] + d1[1] * d1[1] + d1[2] * d1[2]));
      const double g2 = nq * std::exp(-q * (d2[0] * d2[0] + d2[1] * d2[1] + d2[2] * d2[2]));
      const double r12 = std::hypot(r1[0] - r2[0], r1[1] - r2[1], r1[2] - r2[2]);
      const double f = a.value(r1) * c.value(r1) * b.value(r2) * d.value(r2) * gtoci::morse_value(morse, r12) /
                       (g1 * g2);
      s1 += f;
      s2 += f * f;
    }
    sum[ch] = s1;
    sum2[ch] = s2;
  }
  double s1 = 0.0, s2 = 0.0;
  for (int ch = 0; ch < chunks; ++ch) {
    s1 += sum[ch];
    s2 += sum2[ch];
  }
  const double n = static_cast<double>(per_chunk) * chunks;
  McEstimate out;
  out.mean = s1 / n;
  out.standard_error = std::sqrt(std::max(0.0, s2 / n - out.mean * out.mean) / n);
  return out;
}

}  // namespace oracle
