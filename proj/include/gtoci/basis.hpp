#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gtoci {

using Vec3 = std::array<double, 3>;

/// Morse interaction U(r) = De (exp(-2 am (r - Rm)) - 2 exp(-am (r - Rm))),
/// stored in absolute units.
struct MorseParams {
  double depth = 0.0;      // De
  double r_min = 0.0;      // Rm
  double stiffness = 1.0;  // am

  /// De in hbar*omega, Rm in d_ho, am in 1/d_ho.
  static MorseParams from_trap_units(double depth_hw, double r_min_dho, double stiffness_per_dho);

  /// The validation system: Rm = 0.3 and am = sqrt(10) in absolute units,
  /// i.e. Rm ~ 0.212 d_ho and am = sqrt(20)/d_ho.
  static MorseParams benchmark(double depth_hw);

  double r_min_dho() const;
  double stiffness_per_dho() const;
  MorseParams with_depth(double depth_hw) const;
  void validate() const;
};

double morse_value(const MorseParams& p, double r);

struct GaussianWell {
  Vec3 center{};       // absolute
  double depth = 0.0;  // > 0, hbar*omega
  double width = 1.0;  // standard deviation of exp(-|r-c|^2 / (2 width^2)), absolute
};

enum class TrapKind { harmonic_isotropic, gaussian_wells };

struct TrapParams {
  TrapKind kind = TrapKind::harmonic_isotropic;
  double omega = 1.0;
  std::vector<GaussianWell> wells;

  static TrapParams harmonic(double omega = 1.0);
  void validate() const;
};

struct CartesianPowers {
  int i = 0;
  int k = 0;
  int m = 0;
  int sigma() const { return i + k + m; }
  bool operator==(const CartesianPowers&) const = default;
};

/// Members of a Cartesian shell, lexicographically descending in i then k
/// (sigma = 2: xx, xy, xz, yy, yz, zz).
std::vector<CartesianPowers> cartesian_powers(int sigma);

/// (2 tau/pi)^{3/4} sqrt((4 tau)^{i+k+m} / ((2i-1)!! (2k-1)!! (2m-1)!!))
double normalization_constant(int i, int k, int m, double tau);

class GtoPrimitive {
 public:
  GtoPrimitive(CartesianPowers powers, double tau, Vec3 center);

  const CartesianPowers& powers() const { return powers_; }
  int power(int axis) const { return axis == 0 ? powers_.i : axis == 1 ? powers_.k : powers_.m; }
  int sigma() const { return powers_.sigma(); }
  double exponent() const { return tau_; }
  const Vec3& center() const { return center_; }
  double norm() const { return norm_; }

  /// phi(r), normalized.
  double value(const Vec3& r) const;

  bool same_function(const GtoPrimitive& o) const;

 private:
  CartesianPowers powers_;
  double tau_;
  Vec3 center_;
  double norm_;
};

/// One Cartesian shell: every monomial of degree sigma, once per exponent.
/// Exponents are in units of m*omega/hbar; the center is absolute.
struct ShellSpec {
  int sigma = 0;
  std::vector<double> exponents;
  Vec3 center{};

  std::size_t primitive_count() const;
};

class BasisSet {
 public:
  BasisSet() = default;
  BasisSet(std::string name, std::vector<GtoPrimitive> primitives, std::vector<ShellSpec> shells);

  const std::string& name() const { return name_; }
  std::size_t size() const { return primitives_.size(); }
  bool empty() const { return primitives_.empty(); }
  const GtoPrimitive& operator[](std::size_t i) const { return primitives_[i]; }
  std::span<const GtoPrimitive> primitives() const { return primitives_; }
  std::span<const ShellSpec> shells() const { return shells_; }
  int max_sigma() const;
  bool single_center() const;

  /// Same primitives in a different order; the shell list is kept.
  BasisSet permuted(std::span<const std::size_t> order) const;

 private:
  std::string name_;
  std::vector<GtoPrimitive> primitives_;
  std::vector<ShellSpec> shells_;
};

/// Shell order, then exponent order, then Cartesian order.  Throws
/// ConfigurationError on a duplicate primitive.
BasisSet expand_shells(std::span<const ShellSpec> specs, std::string name = "custom");

/// sigma 0..3 x tau {0.3, 0.5, 1.0, 2.2} at the origin, 80 primitives.
BasisSet gto_basis();
/// sigma 0..3 x tau {1.0, 1.7, 2.3} plus sigma 4 and 5 at tau 1.0, 96 primitives.
BasisSet gto2_basis();
/// Cumulative GTO rungs: 1 -> s, 2 -> sp, 3 -> spd, 4 -> spdf.
BasisSet gto_ladder_rung(int shells);
/// "GTO", "GTO-2", or ladder names "s", "sp", "spd", "spdf".
BasisSet named_basis(const std::string& name);

}  // namespace gtoci
