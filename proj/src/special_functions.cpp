#include "gtoci/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gtoci/errors.hpp"
#include "gtoci/quadrature.hpp"

namespace gtoci::special {

namespace {

constexpr double kLogMax = 709.0;
// Kummer series is used for the beta > 0 branch only while it converges
// comfortably inside the 500-term cap.
constexpr double kKummerArgumentLimit = 200.0;

double log_add(double la, double lb) {
  if (la < lb) std::swap(la, lb);
  if (lb == -std::numeric_limits<double>::infinity()) return la;
  return la + std::log1p(std::exp(lb - la));
}

// exp(x^2) with x^2 split into an exactly representable head and a tail.
double exp_square(double x) {
  const double head = static_cast<float>(x);
  const double tail = x - head;
  return std::exp(head * head) * std::exp(tail * (2.0 * head + tail));
}

double erfcx_continued_fraction(double x) {
  // erfc(x) exp(x^2) sqrt(pi) = 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int k = 1; k < 5000; ++k) {
    const double a = 0.5 * k;
    d = x + a * d;
    if (d == 0.0) d = tiny;
    c = x + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / (std::sqrt(std::numbers::pi) * f);
}

// log of the beta > 0 closed form through a forward recurrence on
// T(a) = exp(-z) S(a), which has only positive terms.
double log_s_positive_beta_scaled(int alpha, double beta, double gamma) {
  const double z = beta * beta / (4.0 * gamma);
  const double boundary = std::exp(-z);
  double prev = 0.0;
  double cur = 0.5 * std::sqrt(std::numbers::pi / gamma) * (2.0 - std::erfc(std::sqrt(z)));
  double log_scale = 0.0;
  double boundary_scaled = boundary;
  for (int k = 0; k < alpha; ++k) {
    const double next = (beta * cur + k * prev + (k == 0 ? boundary_scaled : 0.0)) / (2.0 * gamma);
    prev = cur;
    cur = next;
    if (cur > 1e200) {
      prev /= cur;
      log_scale += std::log(cur);
      boundary_scaled /= cur;
      cur = 1.0;
    }
  }
  return z + log_scale + std::log(cur);
}

}  // namespace

double double_factorial(int n) {
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

double factorial(int n) {
  if (n < 0) throw InvalidParameter("factorial of negative integer");
  double r = 1.0;
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return std::round(r);
}

double erfcx(double x) {
  if (x < 0.0) return 2.0 * exp_square(x) - erfcx(-x);
  if (x < 0.5) return std::exp(x * x) * std::erfc(x);
  if (x < 5.0) return exp_square(x) * std::erfc(x);
  return erfcx_continued_fraction(x);
}

double kummer_m(double a, double b, double x) {
  if (b <= 0.0 && b == std::floor(b)) {
    throw InvalidParameter("kummer_m: b must not be a non-positive integer");
  }
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 500; ++k) {
    term *= (a + k) / (b + k) * x / (k + 1);
    sum += term;
    if (term == 0.0 || std::abs(term) < 1e-17 * std::abs(sum)) return sum;
  }
  std::ostringstream msg;
  msg << "kummer_m(" << a << ", " << b << ", " << x << ") did not converge in 500 terms; partial sum "
      << sum << ", last term " << term;
  throw ConvergenceError(msg.str());
}

double log_tricomi_u(double a, double b, double x) {
  if (!(a > 0.0) || !(x > 0.0)) {
    std::ostringstream msg;
    msg << "tricomi_u: domain requires a > 0 and x > 0 (a=" << a << ", x=" << x << ")";
    throw InvalidParameter(msg.str());
  }
  // log of the integrand exp(-x t) t^{a-1} (1+t)^{b-a-1}
  const auto log_integrand = [=](double t) {
    return -x * t + (a - 1.0) * std::log(t) + (b - a - 1.0) * std::log1p(t);
  };
  double scale;
  double shift = 0.0;
  if (a > 1.0) {
    // stationary point: -x t^2 + (b - 2 - x) t + (a - 1) = 0
    const double bb = b - 2.0 - x;
    const double disc = std::sqrt(bb * bb + 4.0 * x * (a - 1.0));
    scale = bb > 0.0 ? (bb + disc) / (2.0 * x) : 2.0 * (a - 1.0) / (disc - bb);
    shift = log_integrand(scale);
  } else {
    scale = 1.0 / x;
  }
  const auto f = [&](double s) {
    const double t = scale * s;
    if (t == 0.0) return 0.0;
    return std::exp(log_integrand(t) - shift);
  };
  const double integral = quad::integrate_half_line(f, 1e-15);
  return shift + std::log(scale * integral) - std::lgamma(a);
}

double tricomi_u(double a, double b, double x) {
  const double lu = log_tricomi_u(a, b, x);
  if (lu > kLogMax) throw std::overflow_error("tricomi_u: value exceeds double range");
  return std::exp(lu);
}

double log_s_integral(const SIntegralParams& p) {
  if (!(p.gamma > 0.0)) throw InvalidParameter("s_integral: gamma must be positive");
  if (p.alpha < 0) throw InvalidParameter("s_integral: alpha must be non-negative");
  const double alpha = p.alpha;
  const double z = p.beta * p.beta / (4.0 * p.gamma);
  if (p.beta < 0.0) {
    return std::lgamma(alpha + 1.0) - (alpha + 1.0) * std::log(2.0 * std::sqrt(p.gamma)) +
           log_tricomi_u(0.5 * (alpha + 1.0), 0.5, z);
  }
  if (p.beta == 0.0) {
    return std::lgamma(0.5 * (alpha + 1.0)) - std::log(2.0) - 0.5 * (alpha + 1.0) * std::log(p.gamma);
  }
  if (z <= kKummerArgumentLimit) {
    try {
      const double m1 = kummer_m(0.5 * alpha + 1.0, 1.5, z);
      const double m2 = kummer_m(0.5 * (alpha + 1.0), 0.5, z);
      const double t1 = std::log(p.beta) + std::lgamma(0.5 * alpha + 1.0) + std::log(m1);
      const double t2 = 0.5 * std::log(p.gamma) + std::lgamma(0.5 * (alpha + 1.0)) + std::log(m2);
      return log_add(t1, t2) - std::log(2.0) - (0.5 * alpha + 1.0) * std::log(p.gamma);
    } catch (const ConvergenceError&) {
      // fall through to the scaled representation
    }
  }
  return log_s_positive_beta_scaled(p.alpha, p.beta, p.gamma);
}

double s_integral(const SIntegralParams& p) {
  const double ls = log_s_integral(p);
  if (ls > kLogMax) {
    std::ostringstream msg;
    msg << "s_integral(" << p.alpha << ", " << p.beta << ", " << p.gamma
        << ") overflows double; log value " << ls;
    throw std::overflow_error(msg.str());
  }
  return std::exp(ls);
}

SRecurrenceResult s_integral_recurrence(int alpha_max, double beta, double gamma) {
  if (!(gamma > 0.0)) throw InvalidParameter("s_integral_recurrence: gamma must be positive");
  if (alpha_max < 0) throw InvalidParameter("s_integral_recurrence: alpha_max must be >= 0");
  const double w = -beta / (2.0 * std::sqrt(gamma));
  if (w * w > kLogMax && beta > 0.0) {
    throw std::overflow_error("s_integral_recurrence: exp(beta^2/4gamma) exceeds double range");
  }
  const double s0 = 0.5 * std::sqrt(std::numbers::pi / gamma) * erfcx(w);
  const auto n = static_cast<std::size_t>(alpha_max) + 1;
  SRecurrenceResult out;
  out.values.assign(n, 0.0);
  out.low_confidence.assign(n, false);
  out.values[0] = s0;

  // Forward growth of the parasitic solution relative to S over alpha_max steps.
  const double amplification = std::abs(beta) * std::sqrt(2.0 * alpha_max / gamma);
  if (beta >= 0.0 || amplification < std::log(1e4)) {
    double prev = 0.0;
    double cur = s0;
    for (int k = 0; k < alpha_max; ++k) {
      const double t1 = beta * cur;
      const double t2 = k * prev + (k == 0 ? 1.0 : 0.0);
      const double next = (t1 + t2) / (2.0 * gamma);
      const double largest = std::max(std::abs(t1), std::abs(t2));
      if (std::abs(next) * 2.0 * gamma < 1e-10 * largest) {
        for (std::size_t j = k + 1; j < n; ++j) out.low_confidence[j] = true;
      }
      prev = cur;
      cur = next;
      out.values[k + 1] = cur;
    }
    return out;
  }

  // Miller: S is the minimal solution for beta < 0.  The parasitic ratio per
  // step is ~exp(-|beta| / sqrt(2 gamma k)), so start well beyond alpha_max.
  const auto run = [&](int start, std::vector<double>& y) {
    y.assign(n, 0.0);
    double up = 0.0;   // y_{k+1}
    double cur = 1.0;  // y_k
    for (int k = start; k >= 1; --k) {
      const double down = (2.0 * gamma * up - beta * cur) / k;  // y_{k-1}
      up = cur;
      cur = down;
      if (k - 1 < static_cast<int>(n)) y[k - 1] = cur;
      if (k <= static_cast<int>(n) && k < static_cast<int>(n)) y[k] = up;
      if (std::abs(cur) > 1e250 || std::abs(cur) < 1e-250) {
        up /= cur;
        for (auto& v : y) v /= cur;
        cur = 1.0;
      }
    }
    const double norm = s0 / y[0];
    for (auto& v : y) v *= norm;
  };
  const double needed = std::pow(40.0 / std::abs(beta), 2) * gamma / 2.0;
  int start = alpha_max + 20 + static_cast<int>(std::min(needed, 1e6));
  std::vector<double> a;
  std::vector<double> b;
  run(start, a);
  bool converged = false;
  for (int iter = 0; iter < 6; ++iter) {
    start *= 2;
    run(start, b);
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) change = std::max(change, std::abs(b[j] - a[j]) / std::abs(b[j]));
    a.swap(b);
    if (change < 1e-15) {
      converged = true;
      break;
    }
  }
  out.values = a;
  if (!converged) std::fill(out.low_confidence.begin(), out.low_confidence.end(), true);
  return out;
}

double spherical_average_monomial(int t, int u, int v) {
  if (t < 0 || u < 0 || v < 0) throw InvalidParameter("spherical_average_monomial: negative power");
  if (t % 2 || u % 2 || v % 2) return 0.0;
  return double_factorial(t - 1) * double_factorial(u - 1) * double_factorial(v - 1) /
         double_factorial(t + u + v + 1);
}

AngularTables::AngularTables(int max_degree) : max_degree_(max_degree) {
  if (max_degree < 0) throw InvalidParameter("AngularTables: negative max_degree");
  const auto side = static_cast<std::size_t>(max_degree + 1);
  average_.assign(side * side * side, 0.0);
  for (int t = 0; t <= max_degree; ++t)
    for (int u = 0; u + t <= max_degree; ++u)
      for (int v = 0; v + u + t <= max_degree; ++v) average_[index(t, u, v)] = spherical_average_monomial(t, u, v);
}

std::size_t AngularTables::index(int t, int u, int v) const {
  const auto side = static_cast<std::size_t>(max_degree_ + 1);
  return (static_cast<std::size_t>(t) * side + u) * side + v;
}

double AngularTables::spherical_average(int t, int u, int v) const {
  if (t + u + v > max_degree_) throw InvalidParameter("AngularTables: degree beyond table");
  return average_[index(t, u, v)];
}

double AngularTables::q0_coefficient(int t, int u, int v) const {
  const double inverse_z00 = 2.0 * std::sqrt(std::numbers::pi);
  return double_factorial(t + u + v + 1) * spherical_average(t, u, v) * inverse_z00;
}

}  // namespace gtoci::special
