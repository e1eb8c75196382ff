#pragma once

#include <cstddef>
#include <vector>

namespace gtoci::special {

/// n!! with (-1)!! = 0!! = 1.
double double_factorial(int n);
double factorial(int n);
double binomial(int n, int k);
double log_factorial(int n);

/// exp(x^2) erfc(x), accurate for all real x where it is representable.
double erfcx(double x);

/// Kummer M(a, b, x) by its power series.  Stops when a term falls below
/// 1e-17 of the partial sum; throws ConvergenceError after 500 terms.
double kummer_m(double a, double b, double x);

/// Tricomi U(a, b, x) for a > 0, x > 0 from
///   U = (1/Gamma(a)) int_0^inf exp(-x t) t^{a-1} (1+t)^{b-a-1} dt.
double tricomi_u(double a, double b, double x);
/// log U(a, b, x); usable when U itself under- or overflows.
double log_tricomi_u(double a, double b, double x);

struct SIntegralParams {
  int alpha = 0;
  double beta = 0.0;
  double gamma = 1.0;
};

/// S(alpha, beta, gamma) = int_0^inf x^alpha exp(beta x - gamma x^2) dx from
/// the Tricomi (beta < 0), Gamma (beta = 0), or Kummer (beta > 0) closed form.
/// Throws std::overflow_error when the value is not representable; use
/// log_s_integral in that regime.
double s_integral(const SIntegralParams& p);
double log_s_integral(const SIntegralParams& p);

struct SRecurrenceResult {
  std::vector<double> values;
  std::vector<bool> low_confidence;
};

/// S(0..alpha_max) from the erfcx closed forms of S(0), S(1) and the relation
///   2 gamma S(a+1) = beta S(a) + a S(a-1).
/// Forward for beta >= 0; for beta < 0 the forward direction cancels and the
/// sequence is generated downward (Miller) and normalized to S(0).
SRecurrenceResult s_integral_recurrence(int alpha_max, double beta, double gamma);

/// Average of xhat^t yhat^u zhat^v over the unit sphere.
double spherical_average_monomial(int t, int u, int v);

/// Q = 0 angular data for the R tensor, tabulated for t+u+v <= max_degree.
class AngularTables {
 public:
  explicit AngularTables(int max_degree);

  int max_degree() const { return max_degree_; }
  double spherical_average(int t, int u, int v) const;
  /// The product c_i(0,0,t,u,v) d^{0,L/2}_{L/2} entering the Q = 0 R tensor,
  /// equal to (L+1)!! <xhat^t yhat^u zhat^v> / Z_00 with L = t+u+v.
  double q0_coefficient(int t, int u, int v) const;

 private:
  std::size_t index(int t, int u, int v) const;
  int max_degree_;
  std::vector<double> average_;
};

}  // namespace gtoci::special
