#include "gtoci/integral_tensor.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "gtoci/errors.hpp"
#include "gtoci/morse_integrals.hpp"
#include "gtoci/units.hpp"

namespace gtoci {

QuartetKey QuartetKey::canonical(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
  if (a > c) std::swap(a, c);
  if (b > d) std::swap(b, d);
  if (std::pair(b, d) < std::pair(a, c)) {
    std::swap(a, b);
    std::swap(c, d);
  }
  return {a, b, c, d};
}

IntegralTensor::IntegralTensor(std::size_t n_basis, const MorseParams& morse, double threshold)
    : n_basis_(n_basis), morse_(morse), threshold_(threshold) {
  if (!(threshold >= 0.0)) throw InvalidParameter("integral threshold must be >= 0");
  const std::size_t m = pair_count();
  data_.assign(m * (m + 1) / 2, 0.0);
}

void IntegralTensor::set(const QuartetKey& key, double value) {
  set_slot(slot(pair_index(key.a, key.c), pair_index(key.b, key.d)), value);
}

std::size_t IntegralTensor::nonzero_count() const {
  return static_cast<std::size_t>(std::count_if(data_.begin(), data_.end(), [](double v) { return v != 0.0; }));
}

IntegralTensor IntegralTensor::rescaled(double depth_hw) const {
  if (morse_.depth == 0.0) throw InvalidParameter("cannot rescale a tensor built for De = 0");
  IntegralTensor out = *this;
  out.morse_ = morse_.with_depth(depth_hw);
  const double factor = out.morse_.depth / morse_.depth;
  for (auto& v : out.data_) {
    v *= factor;
    if (std::abs(v) < threshold_) v = 0.0;
  }
  return out;
}

QuartetKey IntegralTensor::key_of(std::size_t s) const {
  // invert slot = p1 (p1 + 1) / 2 + p2 and pair = c (c + 1) / 2 + a
  const auto untri = [](std::size_t k) {
    auto hi = static_cast<std::size_t>((std::sqrt(8.0 * static_cast<double>(k) + 1.0) - 1.0) / 2.0);
    while (hi * (hi + 1) / 2 > k) --hi;
    while ((hi + 1) * (hi + 2) / 2 <= k) ++hi;
    return std::pair(hi, k - hi * (hi + 1) / 2);
  };
  const auto [p1, p2] = untri(s);
  const auto [c1, a1] = untri(p1);
  const auto [c2, a2] = untri(p2);
  return QuartetKey::canonical(static_cast<std::uint32_t>(a1), static_cast<std::uint32_t>(a2),
                               static_cast<std::uint32_t>(c1), static_cast<std::uint32_t>(c2));
}

namespace {

// Hermite expansion of one pair with its terms grouped by the parity of
// (t, u, v), so the Q = 0 contraction can skip the vanishing R entries.
struct GroupedPair {
  PairExpansion expansion;
  double norm = 1.0;
  int exponent_pair = 0;
  std::array<std::size_t, 9> offsets{};
};

int parity_class(const PairExpansion::Term& t) { return (t.t & 1) | ((t.u & 1) << 1) | ((t.v & 1) << 2); }

GroupedPair group_pair(const GtoPrimitive& a, const GtoPrimitive& c) {
  GroupedPair g;
  g.expansion = pair_expansion(a, c);
  g.norm = a.norm() * c.norm();
  auto& terms = g.expansion.terms;
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& x, const auto& y) { return parity_class(x) < parity_class(y); });
  std::size_t k = 0;
  for (int cls = 0; cls < 8; ++cls) {
    g.offsets[cls] = k;
    while (k < terms.size() && parity_class(terms[k]) == cls) ++k;
  }
  g.offsets[8] = terms.size();
  return g;
}

double contract_q0(const GroupedPair& bra, const GroupedPair& ket, const RTable& r) {
  double sum = 0.0;
  for (int cls = 0; cls < 8; ++cls) {
    const double sign = (cls == 1 || cls == 2 || cls == 4 || cls == 7) ? -1.0 : 1.0;
    for (std::size_t i = bra.offsets[cls]; i < bra.offsets[cls + 1]; ++i) {
      const auto& x = bra.expansion.terms[i];
      double inner = 0.0;
      for (std::size_t j = ket.offsets[cls]; j < ket.offsets[cls + 1]; ++j) {
        const auto& y = ket.expansion.terms[j];
        inner += y.coef * r(x.t + y.t, x.u + y.u, x.v + y.v);
      }
      sum += sign * x.coef * inner;
    }
  }
  return sum;
}

struct FailureLog {
  std::size_t count = 0;
  std::vector<std::string> first;

  void add(const std::string& what) {
#pragma omp critical(gtoci_tensor_failures)
    {
      ++count;
      if (first.size() < 5) first.push_back(what);
    }
  }
};

}  // namespace

IntegralTensor build_integral_tensor(const BasisSet& basis, const MorseParams& morse, double threshold,
                                     Parallelism mode) {
  if (basis.empty()) throw InvalidParameter("build_integral_tensor: empty basis");
  morse.validate();
  const std::size_t n = basis.size();
  IntegralTensor tensor(n, morse, threshold);
  const std::size_t m = tensor.pair_count();
  const bool single_center = basis.single_center();

  // distinct exponents and exponent pairs
  std::vector<double> taus;
  for (const auto& g : basis.primitives()) taus.push_back(g.exponent());
  std::sort(taus.begin(), taus.end());
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  const auto tau_id = [&](double t) {
    return static_cast<int>(std::lower_bound(taus.begin(), taus.end(), t) - taus.begin());
  };
  const int n_tau = static_cast<int>(taus.size());

  std::vector<GroupedPair> pairs(m);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t a = 0; a <= c; ++a) {
      auto& g = pairs[pair_index(a, c)];
      g = group_pair(basis[a], basis[c]);
      int i = tau_id(basis[a].exponent());
      int j = tau_id(basis[c].exponent());
      if (i > j) std::swap(i, j);
      g.exponent_pair = i * n_tau + j;
    }

  FailureLog failures;
  std::vector<std::unique_ptr<RTable>> tables;
  int l_max = 0;
  if (single_center) {
    l_max = 4 * basis.max_sigma();
    const auto k = static_cast<std::size_t>(n_tau * n_tau);
    tables.resize(k * k);
    std::vector<double> pair_exponent(k, 0.0);
    for (const auto& g : pairs) pair_exponent[g.exponent_pair] = g.expansion.p;
    std::vector<std::size_t> used;
    for (std::size_t e = 0; e < k; ++e)
      if (pair_exponent[e] > 0.0) used.push_back(e);
    const auto n_used = static_cast<std::ptrdiff_t>(used.size());
#pragma omp parallel for schedule(dynamic) if (mode == Parallelism::openmp)
    for (std::ptrdiff_t i = 0; i < n_used; ++i) {
      for (std::ptrdiff_t j = 0; j <= i; ++j) {
        const auto e1 = used[i];
        const auto e2 = used[j];
        try {
          auto table = std::make_unique<RTable>(l_max, pair_exponent[e1], pair_exponent[e2], Vec3{}, morse);
          tables[e1 * k + e2] = std::make_unique<RTable>(*table);
          tables[e2 * k + e1] = std::move(table);
        } catch (const std::exception& ex) {
          failures.add(std::string("R table: ") + ex.what());
        }
      }
    }
    if (failures.count > 0) {
      throw ConvergenceError("integral build failed while tabulating R: " + failures.first.front());
    }
  }

  const auto k = static_cast<std::size_t>(n_tau * n_tau);
  const auto n_pairs = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(dynamic, 4) if (mode == Parallelism::openmp)
  for (std::ptrdiff_t p1 = 0; p1 < n_pairs; ++p1) {
    const auto& bra = pairs[p1];
    for (std::ptrdiff_t p2 = 0; p2 <= p1; ++p2) {
      const auto& ket = pairs[p2];
      const std::size_t s = IntegralTensor::slot(p1, p2);
      try {
        double value;
        if (single_center) {
          const auto& r = *tables[static_cast<std::size_t>(bra.exponent_pair) * k + ket.exponent_pair];
          value = bra.norm * ket.norm * contract_q0(bra, ket, r);
        } else {
          const Vec3 Q{ket.expansion.P[0] - bra.expansion.P[0], ket.expansion.P[1] - bra.expansion.P[1],
                       ket.expansion.P[2] - bra.expansion.P[2]};
          const RTable r(bra.expansion.l_max + ket.expansion.l_max, bra.expansion.p, ket.expansion.p, Q, morse);
          value = bra.norm * ket.norm * contract_pairs(bra.expansion, ket.expansion, r);
        }
        tensor.set_slot(s, value);
      } catch (const std::exception& ex) {
        const auto key = tensor.key_of(s);
        std::ostringstream msg;
        msg << "quartet (" << key.a << "," << key.b << "," << key.c << "," << key.d << "): " << ex.what();
        failures.add(msg.str());
      }
    }
  }
  if (failures.count > 0) {
    std::ostringstream msg;
    msg << failures.count << " quartet(s) failed";
    for (const auto& f : failures.first) msg << "\n  " << f;
    throw ConvergenceError(msg.str());
  }
  return tensor;
}

namespace {

constexpr char kMagic[4] = {'T', 'C', 'I', '1'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw CacheError("integral cache truncated");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::array<std::uint8_t, 32> sha256(const std::string& bytes) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != 32) {
    throw CacheError("SHA-256 digest failed");
  }
  return out;
}

}  // namespace

std::array<std::uint8_t, 32> basis_hash(const BasisSet& basis) {
  std::ostringstream buf;
  for (const auto& g : basis.primitives()) {
    put<std::int32_t>(buf, g.powers().i);
    put<std::int32_t>(buf, g.powers().k);
    put<std::int32_t>(buf, g.powers().m);
    put<double>(buf, g.exponent());
    for (double x : g.center()) put<double>(buf, x);
  }
  return sha256(buf.str());
}

std::string integral_cache_name(const BasisSet& basis, const MorseParams& morse, double threshold) {
  std::ostringstream buf;
  const auto h = basis_hash(basis);
  buf.write(reinterpret_cast<const char*>(h.data()), h.size());
  put<double>(buf, morse.r_min);
  put<double>(buf, morse.stiffness);
  put<double>(buf, threshold);
  const auto digest = sha256(buf.str());
  static const char* hex = "0123456789abcdef";
  std::string name = "tci_";
  for (int i = 0; i < 8; ++i) {
    name += hex[digest[i] >> 4];
    name += hex[digest[i] & 15];
  }
  return name + ".bin";
}

void save_integral_cache(const std::filesystem::path& path, const IntegralTensor& tensor, const BasisSet& basis) {
  if (basis.size() != tensor.n_basis()) throw CacheError("basis does not match the tensor");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CacheError("cannot open " + path.string() + " for writing");
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  const auto h = basis_hash(basis);
  out.write(reinterpret_cast<const char*>(h.data()), h.size());
  put<double>(out, tensor.morse().depth);
  put<double>(out, tensor.morse().r_min);
  put<double>(out, tensor.morse().stiffness);
  put<double>(out, tensor.threshold());
  put<std::uint64_t>(out, tensor.nonzero_count());
  const auto data = tensor.data();
  for (std::size_t s = 0; s < data.size(); ++s) {
    if (data[s] == 0.0) continue;
    const auto key = tensor.key_of(s);
    put<std::uint32_t>(out, key.a);
    put<std::uint32_t>(out, key.b);
    put<std::uint32_t>(out, key.c);
    put<std::uint32_t>(out, key.d);
    put<double>(out, data[s]);
  }
  if (!out) throw CacheError("write to " + path.string() + " failed");
}

IntegralTensor load_integral_cache(const std::filesystem::path& path, const BasisSet& basis,
                                   const MorseParams& morse, double threshold) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw CacheError("bad cache magic");
  if (get<std::uint32_t>(in) != kVersion) throw CacheError("unsupported cache version");
  std::array<std::uint8_t, 32> h{};
  if (!in.read(reinterpret_cast<char*>(h.data()), h.size())) throw CacheError("integral cache truncated");
  if (h != basis_hash(basis)) throw CacheError("cache was written for a different basis");
  MorseParams stored;
  stored.depth = get<double>(in);
  stored.r_min = get<double>(in);
  stored.stiffness = get<double>(in);
  if (stored.r_min != morse.r_min || stored.stiffness != morse.stiffness) {
    throw CacheError("cache was written for different Morse Rm/am");
  }
  if (get<double>(in) != threshold) throw CacheError("cache was written with a different threshold");
  if (stored.depth == 0.0) throw CacheError("a zero-depth cache cannot be rescaled");
  const auto count = get<std::uint64_t>(in);
  IntegralTensor tensor(basis.size(), stored, threshold);
  const auto n = static_cast<std::uint32_t>(basis.size());
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto a = get<std::uint32_t>(in);
    const auto b = get<std::uint32_t>(in);
    const auto c = get<std::uint32_t>(in);
    const auto d = get<std::uint32_t>(in);
    const auto v = get<double>(in);
    if (a >= n || b >= n || c >= n || d >= n) throw CacheError("cache key out of range");
    tensor.set(QuartetKey::canonical(a, b, c, d), v);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw CacheError("trailing bytes in integral cache");
  if (morse.depth == stored.depth) return tensor;
  return tensor.rescaled(units::energy_to_hw(morse.depth));
}

}  // namespace gtoci
