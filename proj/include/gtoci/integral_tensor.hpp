#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gtoci/basis.hpp"

namespace gtoci {

/// Indices in <phi_a phi_b | U | phi_c phi_d> order.
struct QuartetKey {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  std::uint32_t c = 0;
  std::uint32_t d = 0;

  /// Representative under a <-> c, b <-> d and (a,c) <-> (b,d): each column
  /// pair sorted, then the lexicographically smaller pair first.
  static QuartetKey canonical(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d);
  bool operator==(const QuartetKey&) const = default;
};

/// Index of the unordered pair {a, c}.
inline std::size_t pair_index(std::size_t a, std::size_t c) {
  if (a > c) std::swap(a, c);
  return c * (c + 1) / 2 + a;
}

/// Two-particle Morse integrals in packed storage, one slot per unordered pair
/// of unordered pairs.
class IntegralTensor {
 public:
  IntegralTensor() = default;
  IntegralTensor(std::size_t n_basis, const MorseParams& morse, double threshold);

  std::size_t n_basis() const { return n_basis_; }
  std::size_t pair_count() const { return n_basis_ * (n_basis_ + 1) / 2; }
  std::size_t slot_count() const { return data_.size(); }
  const MorseParams& morse() const { return morse_; }
  double threshold() const { return threshold_; }

  static std::size_t slot(std::size_t pair1, std::size_t pair2) {
    if (pair1 < pair2) std::swap(pair1, pair2);
    return pair1 * (pair1 + 1) / 2 + pair2;
  }

  double operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return data_[slot(pair_index(a, c), pair_index(b, d))];
  }
  double by_pairs(std::size_t pair_ac, std::size_t pair_bd) const { return data_[slot(pair_ac, pair_bd)]; }

  /// Stores the value (zeroed below the threshold) at the canonical slot.
  void set(const QuartetKey& key, double value);
  void set_slot(std::size_t slot, double value) { data_[slot] = std::abs(value) < threshold_ ? 0.0 : value; }

  std::span<const double> data() const { return data_; }
  std::size_t nonzero_count() const;

  /// Same tensor for a different Morse depth (in hbar*omega); exact because
  /// every integral is proportional to De.
  IntegralTensor rescaled(double depth_hw) const;

  /// Canonical key of a slot.
  QuartetKey key_of(std::size_t slot) const;

 private:
  std::size_t n_basis_ = 0;
  MorseParams morse_{};
  double threshold_ = 0.0;
  std::vector<double> data_;
};

enum class Parallelism { serial, openmp };

/// All canonical quartets of the basis.  Single-center bases use the Q = 0
/// path with R tables shared per exponent pair; every slot is computed by the
/// same kernel whatever the schedule, so serial and OpenMP builds are
/// bitwise identical.  Per-quartet failures are collected and reported
/// together.
IntegralTensor build_integral_tensor(const BasisSet& basis, const MorseParams& morse, double threshold = 1e-14,
                                     Parallelism mode = Parallelism::openmp);

/// SHA-256 over the primitive list (powers, exponent, center).
std::array<std::uint8_t, 32> basis_hash(const BasisSet& basis);

/// Binary little-endian cache: "TCI1", version, basis hash, Morse (De, Rm, am)
/// in absolute units, threshold, record count, then (a, b, c, d, value) for
/// every nonzero canonical entry.
void save_integral_cache(const std::filesystem::path& path, const IntegralTensor& tensor, const BasisSet& basis);

/// Loads a cache written for the same basis, Rm, am and threshold and rescales
/// it to morse.depth.  Throws CacheError on any mismatch or malformed file.
IntegralTensor load_integral_cache(const std::filesystem::path& path, const BasisSet& basis,
                                   const MorseParams& morse, double threshold);

/// Cache file name derived from the content hash of (basis, Rm, am, threshold).
std::string integral_cache_name(const BasisSet& basis, const MorseParams& morse, double threshold);

}  // namespace gtoci
