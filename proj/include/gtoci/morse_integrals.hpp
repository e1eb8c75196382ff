#pragma once

#include <vector>

#include "gtoci/basis.hpp"

namespace gtoci {

/// A real number carried as sign * exp(log_abs) so that large moments of the
/// Morse potential stay representable.
struct SignedLog {
  double sign = 0.0;
  double log_abs = 0.0;
  double value() const;
};

/// Pi_lambda(xi) = int_0^inf r^lambda U(r) exp(-xi r^2) dr for the Morse U.
SignedLog log_master_integral(int lambda, double xi, const MorseParams& morse);
double master_integral(int lambda, double xi, const MorseParams& morse);

/// B(Q) = (pi/(p+q))^{3/2} int d^3r exp(-xi |r - Q|^2) U(|r|), xi = pq/(p+q),
/// and R^{tuv} = d^t/dQx^t d^u/dQy^u d^v/dQz^v B.
struct RTensorRequest {
  int t = 0;
  int u = 0;
  int v = 0;
  double p = 1.0;
  double q = 1.0;
  Vec3 Q{};
};

/// Closed form at Q = 0; zero unless t, u, v are all even.
double r_tensor_q0(int t, int u, int v, double p, double q, const MorseParams& morse);
/// Derivatives of the Taylor representation of B, or the Gauss-Hermite
/// product rule once xi Q^2 exceeds the series switch-over.
double r_tensor_general(const RTensorRequest& req, const MorseParams& morse);
/// Gauss-Hermite evaluation with the derivatives moved onto the Gaussian.
double r_tensor_quadrature(const RTensorRequest& req, const MorseParams& morse, int nodes = 64);

/// Above this xi Q^2 the series is replaced by quadrature.
inline constexpr double kSeriesSwitchOver = 50.0;

/// All R^{tuv} with t+u+v <= l_max for one (p, q, Q).
class RTable {
 public:
  enum class Method { automatic, series, quadrature };

  RTable(int l_max, double p, double q, const Vec3& Q, const MorseParams& morse,
         Method method = Method::automatic, int quadrature_nodes = 64);

  int l_max() const { return l_max_; }
  double operator()(int t, int u, int v) const { return data_[index(t, u, v)]; }

 private:
  std::size_t index(int t, int u, int v) const {
    const auto s = static_cast<std::size_t>(l_max_ + 1);
    return (static_cast<std::size_t>(t) * s + u) * s + v;
  }
  void fill_q0(double p, double q, const MorseParams& morse);
  void fill_series(double p, double q, const Vec3& Q, const MorseParams& morse);
  void fill_quadrature(double p, double q, const Vec3& Q, const MorseParams& morse, int nodes);

  int l_max_;
  std::vector<double> data_;
};

/// Hermite expansion of the product of two primitives on one particle:
/// the nonzero E_t E_u E_v products with exponent p and center P.
struct PairExpansion {
  struct Term {
    int t, u, v;
    double coef;
  };
  double p = 0.0;
  Vec3 P{};
  int l_max = 0;
  std::vector<Term> terms;
};

PairExpansion pair_expansion(const GtoPrimitive& a, const GtoPrimitive& b);

/// Contraction of two pair expansions with an R table built for
/// Q = pair2.P - pair1.P; normalization constants are not included.
double contract_pairs(const PairExpansion& bra, const PairExpansion& ket, const RTable& r);

/// <phi_a phi_b | U | phi_c phi_d>: a, c carry particle 1 and b, d particle 2.
double two_particle_integral(const GtoPrimitive& a, const GtoPrimitive& b, const GtoPrimitive& c,
                             const GtoPrimitive& d, const MorseParams& morse);

}  // namespace gtoci
