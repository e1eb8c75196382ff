#include "gtoci/morse_integrals.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gtoci/errors.hpp"
#include "gtoci/one_body.hpp"
#include "gtoci/quadrature.hpp"
#include "gtoci/special_functions.hpp"

namespace gtoci {

namespace {

constexpr int kSeriesMaxTerms = 200;
constexpr double kSeriesTolerance = 1e-15;

double ipow(double x, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= x;
  return r;
}

// t! / (j! (t-2j)!): coefficient of (2x)^{t-2j} F^{(t-j)} in d^t/dx^t F(x^2).
double chain_coefficient(int t, int j) {
  return special::factorial(t) / (special::factorial(j) * special::factorial(t - 2 * j));
}

}  // namespace

double SignedLog::value() const {
  if (sign == 0.0) return 0.0;
  return sign * std::exp(log_abs);
}

SignedLog log_master_integral(int lambda, double xi, const MorseParams& morse) {
  if (!(xi > 0.0)) throw InvalidParameter("master_integral: xi must be > 0");
  if (lambda < 0) throw InvalidParameter("master_integral: lambda must be >= 0");
  if (morse.depth == 0.0) return {};
  const double a = morse.stiffness;
  const double ar = a * morse.r_min;
  const double l1 = 2.0 * ar + special::log_s_integral({lambda, -2.0 * a, xi});
  const double l2 = std::log(2.0) + ar + special::log_s_integral({lambda, -a, xi});
  if (l1 == l2) return {};
  SignedLog out;
  out.sign = l1 > l2 ? 1.0 : -1.0;
  const double hi = std::max(l1, l2);
  const double lo = std::min(l1, l2);
  out.log_abs = hi + std::log(-std::expm1(lo - hi)) + std::log(morse.depth);
  return out;
}

double master_integral(int lambda, double xi, const MorseParams& morse) {
  return log_master_integral(lambda, xi, morse).value();
}

RTable::RTable(int l_max, double p, double q, const Vec3& Q, const MorseParams& morse, Method method,
               int quadrature_nodes)
    : l_max_(l_max) {
  if (l_max < 0) throw InvalidParameter("RTable: negative l_max");
  if (!(p > 0.0) || !(q > 0.0)) throw InvalidParameter("RTable: exponents must be > 0");
  const auto s = static_cast<std::size_t>(l_max + 1);
  data_.assign(s * s * s, 0.0);
  if (morse.depth == 0.0) return;
  const double q2 = Q[0] * Q[0] + Q[1] * Q[1] + Q[2] * Q[2];
  const double xi = p * q / (p + q);
  if (method == Method::quadrature) {
    fill_quadrature(p, q, Q, morse, quadrature_nodes);
  } else if (q2 == 0.0) {
    fill_q0(p, q, morse);
  } else if (method == Method::series || xi * q2 <= kSeriesSwitchOver) {
    fill_series(p, q, Q, morse);
  } else {
    fill_quadrature(p, q, Q, morse, quadrature_nodes);
  }
}

void RTable::fill_q0(double p, double q, const MorseParams& morse) {
  const double xi = p * q / (p + q);
  const int n_max = l_max_ / 2;
  std::vector<double> pi(static_cast<std::size_t>(n_max + 1));
  for (int n = 0; n <= n_max; ++n) pi[n] = master_integral(2 * n + 2, xi, morse);
  // G_N = sum_n (-1)^{N-n} C(N,n) (2 xi)^{n+N} / (2n+1)!! Pi_{2n+2}
  std::vector<double> g(static_cast<std::size_t>(n_max + 1), 0.0);
  for (int N = 0; N <= n_max; ++N) {
    double sum = 0.0;
    for (int n = 0; n <= N; ++n) {
      const double sign = (N - n) % 2 ? -1.0 : 1.0;
      sum += sign * special::binomial(N, n) * std::pow(2.0 * xi, n + N) / special::double_factorial(2 * n + 1) *
             pi[n];
    }
    g[N] = sum;
  }
  const double pref = 2.0 * std::numbers::pi * std::numbers::pi / std::pow(p + q, 1.5);
  const special::AngularTables angular(l_max_);
  for (int t = 0; t <= l_max_; t += 2)
    for (int u = 0; t + u <= l_max_; u += 2)
      for (int v = 0; t + u + v <= l_max_; v += 2)
        data_[index(t, u, v)] = pref * angular.q0_coefficient(t, u, v) * g[(t + u + v) / 2];
}

void RTable::fill_series(double p, double q, const Vec3& Q, const MorseParams& morse) {
  const double xi = p * q / (p + q);
  const double s = Q[0] * Q[0] + Q[1] * Q[1] + Q[2] * Q[2];
  const double log_s = std::log(s);
  const double log_k = std::log(4.0 * std::numbers::pi) + 1.5 * std::log(std::numbers::pi / (p + q));
  const int m_max = l_max_;

  // F^{(m)}(s) = K e^{-xi s} sum_n a_n sum_j C(m,j) n!/(n-j)! s^{n-j} (-xi)^{m-j}
  std::vector<double> deriv(static_cast<std::size_t>(m_max + 1), 0.0);
  int quiet = 0;
  int n = 0;
  for (; n < kSeriesMaxTerms; ++n) {
    const SignedLog pi = log_master_integral(2 * n + 2, xi, morse);
    bool small = true;
    if (pi.sign != 0.0) {
      const double log_a = 2.0 * n * std::log(2.0 * xi) - std::lgamma(2.0 * n + 2.0) + pi.log_abs;
      for (int m = 0; m <= m_max; ++m) {
        double term = 0.0;
        for (int j = 0; j <= std::min(m, n); ++j) {
          const double falling = std::exp(std::lgamma(n + 1.0) - std::lgamma(n - j + 1.0));
          const double mag = std::exp(log_k + log_a + (n - j) * log_s - xi * s);
          term += special::binomial(m, j) * falling * mag * ipow(-xi, m - j);
        }
        term *= pi.sign;
        deriv[m] += term;
        if (std::abs(term) > kSeriesTolerance * std::abs(deriv[m])) small = false;
      }
    }
    if (small && n >= m_max && n > xi * s) {
      if (++quiet == 2) break;
    } else {
      quiet = 0;
    }
  }
  if (n >= kSeriesMaxTerms) {
    std::ostringstream msg;
    msg << "R tensor series did not converge in " << kSeriesMaxTerms << " terms (xi Q^2 = " << xi * s
        << ", xi = " << xi << ", |Q| = " << std::sqrt(s) << ")";
    throw ConvergenceError(msg.str());
  }

  const double two_q[3] = {2.0 * Q[0], 2.0 * Q[1], 2.0 * Q[2]};
  for (int t = 0; t <= l_max_; ++t)
    for (int u = 0; t + u <= l_max_; ++u)
      for (int v = 0; t + u + v <= l_max_; ++v) {
        double sum = 0.0;
        for (int j = 0; 2 * j <= t; ++j)
          for (int k = 0; 2 * k <= u; ++k)
            for (int l = 0; 2 * l <= v; ++l) {
              const double c = chain_coefficient(t, j) * chain_coefficient(u, k) * chain_coefficient(v, l);
              sum += c * ipow(two_q[0], t - 2 * j) * ipow(two_q[1], u - 2 * k) * ipow(two_q[2], v - 2 * l) *
                     deriv[t + u + v - j - k - l];
            }
        data_[index(t, u, v)] = sum;
      }
}

void RTable::fill_quadrature(double p, double q, const Vec3& Q, const MorseParams& morse, int nodes) {
  const double xi = p * q / (p + q);
  const auto rule = quad::gauss_hermite(nodes);
  const auto n = static_cast<std::size_t>(nodes);
  const auto lm = static_cast<std::size_t>(l_max_ + 1);
  const double scale = 1.0 / std::sqrt(xi);

  // physicists' Hermite polynomials times the weights, per node
  std::vector<double> wh(n * lm);
  for (std::size_t a = 0; a < n; ++a) {
    const double y = rule.nodes[a];
    double h0 = 1.0;
    double h1 = 2.0 * y;
    for (std::size_t t = 0; t < lm; ++t) {
      wh[a * lm + t] = rule.weights[a] * h0;
      const double h2 = 2.0 * y * h1 - 2.0 * (t + 1.0) * h0;
      h0 = h1;
      h1 = h2;
    }
  }

  std::vector<double> c_sum(n * n * lm, 0.0);  // [a][b][v]
  for (std::size_t a = 0; a < n; ++a) {
    const double x = Q[0] + rule.nodes[a] * scale;
    for (std::size_t b = 0; b < n; ++b) {
      const double y = Q[1] + rule.nodes[b] * scale;
      double* out = &c_sum[(a * n + b) * lm];
      for (std::size_t c = 0; c < n; ++c) {
        const double z = Q[2] + rule.nodes[c] * scale;
        const double u = morse_value(morse, std::sqrt(x * x + y * y + z * z));
        for (std::size_t v = 0; v < lm; ++v) out[v] += wh[c * lm + v] * u;
      }
    }
  }
  std::vector<double> b_sum(n * lm * lm, 0.0);  // [a][u][v]
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t u = 0; u < lm; ++u)
        for (std::size_t v = 0; u + v < lm; ++v)
          b_sum[(a * lm + u) * lm + v] += wh[b * lm + u] * c_sum[(a * n + b) * lm + v];

  const double pref = std::pow(std::numbers::pi / (p + q), 1.5);
  for (int t = 0; t <= l_max_; ++t)
    for (int u = 0; t + u <= l_max_; ++u)
      for (int v = 0; t + u + v <= l_max_; ++v) {
        double sum = 0.0;
        for (std::size_t a = 0; a < n; ++a) sum += wh[a * lm + t] * b_sum[(a * lm + u) * lm + v];
        data_[index(t, u, v)] = pref * std::pow(xi, 0.5 * (t + u + v - 3)) * sum;
      }
}

double r_tensor_q0(int t, int u, int v, double p, double q, const MorseParams& morse) {
  if (t < 0 || u < 0 || v < 0) throw InvalidParameter("r_tensor_q0: negative index");
  if (t % 2 || u % 2 || v % 2) return 0.0;
  return RTable(t + u + v, p, q, {0.0, 0.0, 0.0}, morse)(t, u, v);
}

double r_tensor_general(const RTensorRequest& req, const MorseParams& morse) {
  if (req.t < 0 || req.u < 0 || req.v < 0) throw InvalidParameter("r_tensor_general: negative index");
  return RTable(req.t + req.u + req.v, req.p, req.q, req.Q, morse)(req.t, req.u, req.v);
}

double r_tensor_quadrature(const RTensorRequest& req, const MorseParams& morse, int nodes) {
  if (req.t < 0 || req.u < 0 || req.v < 0) throw InvalidParameter("r_tensor_quadrature: negative index");
  const RTable table(req.t + req.u + req.v, req.p, req.q, req.Q, morse, RTable::Method::quadrature, nodes);
  return table(req.t, req.u, req.v);
}

PairExpansion pair_expansion(const GtoPrimitive& a, const GtoPrimitive& b) {
  PairExpansion out;
  out.p = a.exponent() + b.exponent();
  std::vector<double> e[3];
  for (int d = 0; d < 3; ++d) {
    out.P[d] = (a.exponent() * a.center()[d] + b.exponent() * b.center()[d]) / out.p;
    e[d] = hermite_coeffs(a.power(d), b.power(d), a.exponent(), b.exponent(), a.center()[d], b.center()[d]);
  }
  if (a.center() == b.center()) out.P = a.center();
  out.l_max = a.sigma() + b.sigma();
  for (int t = 0; t < static_cast<int>(e[0].size()); ++t)
    for (int u = 0; u < static_cast<int>(e[1].size()); ++u)
      for (int v = 0; v < static_cast<int>(e[2].size()); ++v) {
        const double c = e[0][t] * e[1][u] * e[2][v];
        if (c != 0.0) out.terms.push_back({t, u, v, c});
      }
  return out;
}

double contract_pairs(const PairExpansion& bra, const PairExpansion& ket, const RTable& r) {
  double sum = 0.0;
  for (const auto& x : bra.terms) {
    double inner = 0.0;
    for (const auto& y : ket.terms) inner += y.coef * r(x.t + y.t, x.u + y.u, x.v + y.v);
    sum += ((x.t + x.u + x.v) % 2 ? -1.0 : 1.0) * x.coef * inner;
  }
  return sum;
}

double two_particle_integral(const GtoPrimitive& a, const GtoPrimitive& b, const GtoPrimitive& c,
                             const GtoPrimitive& d, const MorseParams& morse) {
  if (morse.depth == 0.0) return 0.0;
  const auto bra = pair_expansion(a, c);
  const auto ket = pair_expansion(b, d);
  Vec3 Q{ket.P[0] - bra.P[0], ket.P[1] - bra.P[1], ket.P[2] - bra.P[2]};
  const bool single_center = a.center() == b.center() && a.center() == c.center() && a.center() == d.center();
  if (single_center) Q = {0.0, 0.0, 0.0};
  try {
    const RTable r(bra.l_max + ket.l_max, bra.p, ket.p, Q, morse);
    return a.norm() * b.norm() * c.norm() * d.norm() * contract_pairs(bra, ket, r);
  } catch (const ConvergenceError& e) {
    std::ostringstream msg;
    msg << e.what() << " for quartet with exponents (" << a.exponent() << ", " << b.exponent() << ", "
        << c.exponent() << ", " << d.exponent() << ")";
    throw ConvergenceError(msg.str());
  }
}

}  // namespace gtoci
