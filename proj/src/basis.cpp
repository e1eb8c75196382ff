#include "gtoci/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gtoci/errors.hpp"
#include "gtoci/special_functions.hpp"
#include "gtoci/units.hpp"

namespace gtoci {

MorseParams MorseParams::from_trap_units(double depth_hw, double r_min_dho, double stiffness_per_dho) {
  MorseParams p;
  p.depth = units::energy_from_hw(depth_hw);
  p.r_min = units::length_from_dho(r_min_dho);
  p.stiffness = units::inverse_length_from_dho(stiffness_per_dho);
  p.validate();
  return p;
}

MorseParams MorseParams::benchmark(double depth_hw) {
  MorseParams p;
  p.depth = units::energy_from_hw(depth_hw);
  p.r_min = 0.3;
  p.stiffness = std::sqrt(10.0);
  p.validate();
  return p;
}

double MorseParams::r_min_dho() const { return units::length_to_dho(r_min); }
double MorseParams::stiffness_per_dho() const { return units::inverse_length_to_dho(stiffness); }

MorseParams MorseParams::with_depth(double depth_hw) const {
  MorseParams p = *this;
  p.depth = units::energy_from_hw(depth_hw);
  p.validate();
  return p;
}

void MorseParams::validate() const {
  if (!(depth >= 0.0)) throw InvalidParameter("Morse depth De must be >= 0");
  if (!(r_min >= 0.0)) throw InvalidParameter("Morse Rm must be >= 0");
  if (!(stiffness > 0.0)) throw InvalidParameter("Morse am must be > 0");
}

double morse_value(const MorseParams& p, double r) {
  const double e = std::exp(-p.stiffness * (r - p.r_min));
  return p.depth * (e * e - 2.0 * e);
}

TrapParams TrapParams::harmonic(double omega) {
  TrapParams t;
  t.kind = TrapKind::harmonic_isotropic;
  t.omega = omega;
  t.validate();
  return t;
}

void TrapParams::validate() const {
  if (kind == TrapKind::harmonic_isotropic) {
    if (!wells.empty()) throw ConfigurationError("harmonic trap must not carry Gaussian wells");
    if (!(omega > 0.0)) throw InvalidParameter("trap omega must be > 0");
    return;
  }
  if (wells.empty()) throw ConfigurationError("gaussian_wells trap needs at least one well");
  for (const auto& w : wells) {
    if (!(w.depth > 0.0)) throw InvalidParameter("Gaussian well depth must be > 0");
    if (!(w.width > 0.0)) throw InvalidParameter("Gaussian well width must be > 0");
  }
}

std::vector<CartesianPowers> cartesian_powers(int sigma) {
  if (sigma < 0) throw InvalidParameter("shell degree must be >= 0");
  std::vector<CartesianPowers> out;
  out.reserve(static_cast<std::size_t>((sigma + 1) * (sigma + 2) / 2));
  for (int i = sigma; i >= 0; --i)
    for (int k = sigma - i; k >= 0; --k) out.push_back({i, k, sigma - i - k});
  return out;
}

double normalization_constant(int i, int k, int m, double tau) {
  if (!(tau > 0.0)) throw InvalidParameter("GTO exponent must be > 0");
  if (i < 0 || k < 0 || m < 0) throw InvalidParameter("Cartesian powers must be >= 0");
  using special::double_factorial;
  const double denom = double_factorial(2 * i - 1) * double_factorial(2 * k - 1) * double_factorial(2 * m - 1);
  return std::pow(2.0 * tau / std::numbers::pi, 0.75) * std::sqrt(std::pow(4.0 * tau, i + k + m) / denom);
}

GtoPrimitive::GtoPrimitive(CartesianPowers powers, double tau, Vec3 center)
    : powers_(powers), tau_(tau), center_(center), norm_(normalization_constant(powers.i, powers.k, powers.m, tau)) {}

double GtoPrimitive::value(const Vec3& r) const {
  const double x = r[0] - center_[0];
  const double y = r[1] - center_[1];
  const double z = r[2] - center_[2];
  return norm_ * std::pow(x, powers_.i) * std::pow(y, powers_.k) * std::pow(z, powers_.m) *
         std::exp(-tau_ * (x * x + y * y + z * z));
}

bool GtoPrimitive::same_function(const GtoPrimitive& o) const {
  return powers_ == o.powers_ && tau_ == o.tau_ && center_ == o.center_;
}

std::size_t ShellSpec::primitive_count() const {
  return static_cast<std::size_t>((sigma + 1) * (sigma + 2) / 2) * exponents.size();
}

BasisSet::BasisSet(std::string name, std::vector<GtoPrimitive> primitives, std::vector<ShellSpec> shells)
    : name_(std::move(name)), primitives_(std::move(primitives)), shells_(std::move(shells)) {}

int BasisSet::max_sigma() const {
  int s = 0;
  for (const auto& p : primitives_) s = std::max(s, p.sigma());
  return s;
}

bool BasisSet::single_center() const {
  return std::all_of(primitives_.begin(), primitives_.end(),
                     [&](const GtoPrimitive& p) { return p.center() == primitives_.front().center(); });
}

BasisSet BasisSet::permuted(std::span<const std::size_t> order) const {
  if (order.size() != primitives_.size()) throw InvalidParameter("permutation size mismatch");
  std::vector<bool> seen(order.size(), false);
  std::vector<GtoPrimitive> out;
  out.reserve(order.size());
  for (auto i : order) {
    if (i >= order.size() || seen[i]) throw InvalidParameter("not a permutation");
    seen[i] = true;
    out.push_back(primitives_[i]);
  }
  return BasisSet(name_, std::move(out), shells_);
}

BasisSet expand_shells(std::span<const ShellSpec> specs, std::string name) {
  std::vector<GtoPrimitive> prims;
  for (const auto& s : specs) {
    if (s.sigma < 0) throw InvalidParameter("shell degree must be >= 0");
    if (s.exponents.empty()) throw ConfigurationError("shell without exponents");
    const auto members = cartesian_powers(s.sigma);
    for (double tau : s.exponents) {
      for (const auto& pw : members) {
        GtoPrimitive g(pw, tau, s.center);
        for (const auto& other : prims) {
          if (other.same_function(g)) {
            std::ostringstream msg;
            msg << "duplicate primitive (i,k,m)=(" << pw.i << "," << pw.k << "," << pw.m << ") tau=" << tau
                << " center=(" << s.center[0] << "," << s.center[1] << "," << s.center[2] << ")";
            throw ConfigurationError(msg.str());
          }
        }
        prims.push_back(g);
      }
    }
  }
  return BasisSet(std::move(name), std::move(prims), std::vector<ShellSpec>(specs.begin(), specs.end()));
}

namespace {

const std::vector<double> kGtoExponents{0.3, 0.5, 1.0, 2.2};

std::vector<ShellSpec> gto_shells(int count) {
  std::vector<ShellSpec> shells;
  for (int s = 0; s < count; ++s) shells.push_back({s, kGtoExponents, {0.0, 0.0, 0.0}});
  return shells;
}

}  // namespace

BasisSet gto_basis() { return expand_shells(gto_shells(4), "GTO"); }

BasisSet gto2_basis() {
  std::vector<ShellSpec> shells;
  for (int s = 0; s <= 3; ++s) shells.push_back({s, {1.0, 1.7, 2.3}, {0.0, 0.0, 0.0}});
  shells.push_back({4, {1.0}, {0.0, 0.0, 0.0}});
  shells.push_back({5, {1.0}, {0.0, 0.0, 0.0}});
  return expand_shells(shells, "GTO-2");
}

BasisSet gto_ladder_rung(int shells) {
  static const char* names[] = {"s", "sp", "spd", "spdf"};
  if (shells < 1 || shells > 4) throw InvalidParameter("ladder rung must be 1..4");
  return expand_shells(gto_shells(shells), names[shells - 1]);
}

BasisSet named_basis(const std::string& name) {
  if (name == "GTO") return gto_basis();
  if (name == "GTO-2") return gto2_basis();
  if (name == "s") return gto_ladder_rung(1);
  if (name == "sp") return gto_ladder_rung(2);
  if (name == "spd") return gto_ladder_rung(3);
  if (name == "spdf") return gto_ladder_rung(4);
  throw ConfigurationError("unknown basis name '" + name + "' (expected GTO, GTO-2, s, sp, spd, spdf)");
}

}  // namespace gtoci
