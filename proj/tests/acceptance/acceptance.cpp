// One pass/fail line per acceptance criterion: `acceptance <name>`, or
// `acceptance all`.  The exit status is 0 only when every selected
// criterion passes.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gtoci/basis.hpp"
#include "gtoci/blas_guard.hpp"
#include "gtoci/ci.hpp"
#include "gtoci/integral_tensor.hpp"
#include "gtoci/morse_integrals.hpp"
#include "gtoci/reference.hpp"
#include "gtoci/special_functions.hpp"
#include "gtoci/units.hpp"
#include "gtoci/workflows.hpp"
#include "oracles/two_body.hpp"

extern "C" void openblas_set_num_threads(int);

using namespace gtoci;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Report {
 public:
  void check(bool ok, const std::string& what) {
    pass_ = pass_ && ok;
    if (!detail_.empty()) detail_ += "; ";
    detail_ += what + (ok ? "" : " [out of tolerance]");
  }
  Outcome outcome() const { return {pass_, detail_}; }

 private:
  bool pass_ = true;
  std::string detail_;
};

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

std::string sci(double x) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << x;
  return s.str();
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const MorseParams kShape = MorseParams::benchmark(1.0);

CiEngine make_engine(const BasisSet& basis, SolverRoute route = SolverRoute::canonical_orthogonalization,
                     Parallelism mode = Parallelism::openmp) {
  CiEngine::Options o;
  o.route = route;
  o.mode = mode;
  return CiEngine(basis, TrapParams::harmonic(), kShape, o);
}

/// CI energy of a labelled state at one depth.
double ci_level(const CiEngine& engine, double de, const std::string& label) {
  const auto ref = reference_spectrum(MorseParams::benchmark(de));
  const auto sol = engine.solve(de, 60, true);
  for (const auto& m : match_states(engine.multiplets(sol), ref))
    if (m.reference.label == label && m.ci) return m.ci->energy;
  throw std::runtime_error("no CI multiplet for " + label);
}

Outcome poles() {
  Report r;
  const auto t0 = std::chrono::steady_clock::now();
  const auto found = pole_positions(kShape, 0.5, 70.0, 3);
  const double elapsed = since(t0);
  const double want[] = {3.823, 24.877, 65.075};
  if (found.poles_hw.size() != 3) {
    r.check(false, "found " + std::to_string(found.poles_hw.size()) + " poles: " + found.diagnostic);
    return r.outcome();
  }
  for (int k = 0; k < 3; ++k)
    r.check(std::abs(found.poles_hw[k] - want[k]) <= 0.01,
            "pole " + std::to_string(k + 1) + " " + fmt(found.poles_hw[k]) + " vs " + fmt(want[k], 3));
  r.check(elapsed < 30.0, "search " + fmt(elapsed, 2) + " s");
  return r.outcome();
}

Outcome scattering_lengths() {
  Report r;
  const double de[] = {3.0, 5.0, 10.0, 13.0};
  const double want[] = {-2.550, 2.758, 0.852, 0.579};
  for (int k = 0; k < 4; ++k) {
    const double as = scattering_length(MorseParams::benchmark(de[k])).as_dho;
    r.check(std::abs(as - want[k]) <= 0.005, "De=" + fmt(de[k], 0) + " a_s=" + fmt(as) + " vs " + fmt(want[k], 3));
  }
  return r.outcome();
}

Outcome reference_levels() {
  Report r;
  const auto ref = reference_spectrum(MorseParams::benchmark(3.0));
  const double mgs = ref.find("MGS").energy, ms1 = ref.find("MS1").energy, ms2 = ref.find("MS2").energy;
  r.check(std::abs(mgs - 2.483) <= 0.002, "MGS " + fmt(mgs, 5));
  r.check(std::abs(ms1 - 3.483) <= 0.002, "MS1 " + fmt(ms1, 5));
  r.check(std::abs(ms2 - 4.483) <= 0.002, "MS2 " + fmt(ms2, 5));
  r.check(std::abs(ms1 - mgs - 1.0) < 1e-12 && std::abs(ms2 - mgs - 2.0) < 1e-12, "spacing exactly 1 hbar*omega");
  return r.outcome();
}

Outcome ci_gto() {
  Report r;
  const auto engine = make_engine(gto_basis());
  const double want[] = {2.484, 3.491, 4.495};
  const char* labels[] = {"MGS", "MS1", "MS2"};
  for (int k = 0; k < 3; ++k) {
    const double e = ci_level(engine, 3.0, labels[k]);
    r.check(std::abs(e - want[k]) <= 0.003, std::string(labels[k]) + "(De=3) " + fmt(e, 5));
  }
  const double deep = ci_level(engine, 13.0, "MGS");
  r.check(std::abs(deep + 1.393) <= 0.005, "MGS(De=13) " + fmt(deep, 5));
  return r.outcome();
}

Outcome ci_gto2() {
  Report r;
  const double e2 = make_engine(gto2_basis()).solve(13.0, 1, false).energies(0);
  const double e1 = make_engine(gto_basis()).solve(13.0, 1, false).energies(0);
  r.check(std::abs(e2 + 1.442) <= 0.005, "GTO-2 MGS(De=13) " + fmt(e2, 5));
  r.check(e2 < e1, "below GTO " + fmt(e1, 5));
  return r.outcome();
}

Outcome binding_errors() {
  Report r;
  const auto engine = make_engine(gto_basis());
  const double de[] = {3.0, 5.0, 10.0, 13.0};
  const double want[] = {0.315, 0.699, 1.811, 2.316};
  for (int k = 0; k < 4; ++k) {
    const double e_ref = reference_spectrum(MorseParams::benchmark(de[k])).find("MGS").energy;
    const double e = engine.solve(de[k], 1, false).energies(0);
    const double rel = 100.0 * (e - e_ref) / (units::noninteracting_ground_energy - e_ref);
    r.check(std::abs(rel - want[k]) <= 0.10, "De=" + fmt(de[k], 0) + " " + fmt(rel, 3) + "%");
  }
  return r.outcome();
}

Outcome variational_ladder() {
  Report r;
  const double de[] = {3.0, 5.0, 10.0, 13.0};
  std::vector<std::vector<double>> e(4);
  for (int rung = 1; rung <= 4; ++rung) {
    const auto engine = make_engine(gto_ladder_rung(rung));
    for (int k = 0; k < 4; ++k) e[k].push_back(engine.solve(de[k], 1, false).energies(0));
  }
  for (int k = 0; k < 4; ++k) {
    const double e_ref = reference_spectrum(MorseParams::benchmark(de[k])).find("MGS").energy;
    bool monotone = true;
    for (int rung = 1; rung < 4; ++rung) monotone = monotone && e[k][rung] <= e[k][rung - 1];
    std::string ladder;
    for (double x : e[k]) ladder += (ladder.empty() ? "" : " > ") + fmt(x);
    r.check(monotone && e[k][3] >= e_ref, "De=" + fmt(de[k], 0) + " " + ladder + " >= ref " + fmt(e_ref));
  }
  return r.outcome();
}

Outcome configuration_counts() {
  Report r;
  const auto a = enumerate_configurations(gto_basis().size()).size();
  const auto b = enumerate_configurations(gto2_basis().size()).size();
  r.check(a == 3240, "GTO " + std::to_string(a));
  r.check(b == 4656, "GTO-2 " + std::to_string(b));
  return r.outcome();
}

Outcome route_agreement() {
  Report r;
  const auto canon = make_engine(gto_basis()).solve(3.0, -1, false);
  const auto cong = make_engine(gto_basis(), SolverRoute::congruence).solve(3.0, -1, false);
  if (canon.energies.size() != cong.energies.size()) {
    r.check(false, "kept dimensions differ");
    return r.outcome();
  }
  double worst = 0.0, worst_e = 0.0, low = 0.0;
  for (Eigen::Index k = 0; k < canon.energies.size(); ++k) {
    const double d = std::abs(canon.energies(k) - cong.energies(k)) / std::max(1.0, std::abs(canon.energies(k)));
    if (d > worst) {
      worst = d;
      worst_e = canon.energies(k);
    }
    if (k < 60) low = std::max(low, d);
  }
  r.check(worst <= 1e-9, "worst relative difference " + sci(worst) + " at E=" + fmt(worst_e, 2) +
                             " over " + std::to_string(canon.energies.size()) + " states, lowest 60 " + sci(low));
  return r.outcome();
}

GtoPrimitive random_primitive(std::mt19937_64& rng, int max_sigma, double radius) {
  std::uniform_int_distribution<int> sigma(0, max_sigma);
  std::uniform_real_distribution<double> log_tau(std::log(0.3), std::log(2.2));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec3 c{};
  if (radius > 0.0) {
    do {
      c = {unit(rng), unit(rng), unit(rng)};
    } while (c[0] * c[0] + c[1] * c[1] + c[2] * c[2] > 1.0);
    for (auto& x : c) x *= radius;
  }
  const auto shell = cartesian_powers(sigma(rng));
  std::uniform_int_distribution<std::size_t> pick(0, shell.size() - 1);
  return GtoPrimitive(shell[pick(rng)], std::exp(log_tau(rng)), c);
}

Outcome integral_oracles() {
  Report r;
  const auto morse = MorseParams::benchmark(3.0);
  std::mt19937_64 rng(2024);
  // 200 parity-allowed quartets compared relatively; parity-forbidden draws
  // met on the way must vanish
  auto even_parity = [](const GtoPrimitive& a, const GtoPrimitive& b, const GtoPrimitive& c,
                        const GtoPrimitive& d) {
    for (int ax = 0; ax < 3; ++ax)
      if ((a.power(ax) + b.power(ax) + c.power(ax) + d.power(ax)) % 2) return false;
    return true;
  };
  double worst = 0.0;
  double worst_zero = 0.0;
  int zeros = 0;
  for (int n = 0; n < 200;) {
    const auto a = random_primitive(rng, 3, 0.0), b = random_primitive(rng, 3, 0.0);
    const auto c = random_primitive(rng, 3, 0.0), d = random_primitive(rng, 3, 0.0);
    const double got = two_particle_integral(a, b, c, d, morse);
    if (!even_parity(a, b, c, d)) {
      ++zeros;
      worst_zero = std::max(worst_zero, std::abs(got));
      continue;
    }
    const double want = oracle::relative_coordinate(a, b, c, d, morse);
    worst = std::max(worst, std::abs(got - want) / std::abs(want));
    ++n;
  }
  r.check(worst <= 1e-8 && worst_zero == 0.0,
          "200 single-center quartets, worst relative deviation " + sci(worst) + "; " + std::to_string(zeros) +
              " parity-forbidden quartets, largest " + sci(worst_zero));

  // centers inside a ball of radius d_ho/2, so every pair-center separation is at most d_ho
  int outside = 0;
  double worst_z = 0.0;
  for (int n = 0; n < 20; ++n) {
    const double radius = 0.5 * units::d_ho;
    const auto a = random_primitive(rng, 2, radius), b = random_primitive(rng, 2, radius);
    const auto c = random_primitive(rng, 2, radius), d = random_primitive(rng, 2, radius);
    const double got = two_particle_integral(a, b, c, d, morse);
    const auto mc = oracle::monte_carlo(a, b, c, d, morse, 4'000'000, 7000 + n);
    const double z = std::abs(got - mc.mean) / mc.standard_error;
    worst_z = std::max(worst_z, z);
    if (z > 3.0) ++outside;
  }
  r.check(outside == 0, "20 shifted-center quartets vs Monte Carlo, worst " + fmt(worst_z, 2) + " standard errors");

  double odd = 0.0;
  for (int t = 0; t <= 11; ++t)
    for (int u = 0; t + u <= 11; ++u)
      for (int v = 0; t + u + v <= 11; ++v)
        if ((t + u + v) % 2) odd = std::max(odd, std::abs(r_tensor_q0(t, u, v, 1.3, 0.8, morse)));
  r.check(odd == 0.0, "odd Q=0 tensor entries up to degree 11 are exactly zero");
  return r.outcome();
}

Outcome depth_linearity() {
  Report r;
  const auto basis = gto_basis();
  const auto t3 = build_integral_tensor(basis, MorseParams::benchmark(3.0), 0.0);
  const auto t7 = build_integral_tensor(basis, MorseParams::benchmark(7.0), 0.0);
  double worst = 0.0;
  for (std::size_t s = 0; s < t3.slot_count(); ++s) {
    const double a = t3.data()[s] * 7.0 / 3.0, b = t7.data()[s];
    if (b != 0.0) worst = std::max(worst, std::abs(a - b) / std::abs(b));
  }
  r.check(worst <= 1e-12, "I(7)/I(3) = 7/3 over " + std::to_string(t3.slot_count()) + " slots, worst " + sci(worst));
  return r.outcome();
}

Outcome runtime_and_determinism() {
  Report r;
  const int threads = omp_get_max_threads();
  omp_set_num_threads(1);
  openblas_set_num_threads(1);
  const auto t0 = std::chrono::steady_clock::now();
  const auto engine = make_engine(gto_basis(), SolverRoute::canonical_orthogonalization, Parallelism::serial);
  const auto sol = engine.solve(3.0, 60, true);
  const double elapsed = since(t0);
  r.check(elapsed <= 600.0 && sol.energies.size() == 60, "single-threaded N=80 CI " + fmt(elapsed, 1) + " s");

  omp_set_num_threads(std::max(threads, 4));
  const auto morse = MorseParams::benchmark(3.0);
  const auto serial = build_integral_tensor(gto_basis(), morse, 1e-14, Parallelism::serial);
  const auto parallel = build_integral_tensor(gto_basis(), morse, 1e-14, Parallelism::openmp);
  const bool same_tensor = serial.slot_count() == parallel.slot_count() &&
                           std::memcmp(serial.data().data(), parallel.data().data(),
                                       serial.slot_count() * sizeof(double)) == 0;
  const auto space = enumerate_configurations(gto_basis().size());
  const auto hs = assemble_two_body(space, serial, Parallelism::serial);
  const auto hp = assemble_two_body(space, parallel, Parallelism::openmp);
  const bool same_matrix = std::memcmp(hs.data(), hp.data(), sizeof(double) * hs.size()) == 0;
  r.check(same_tensor && same_matrix, "serial and " + std::to_string(omp_get_max_threads()) +
                                          "-thread tensor and assembly bitwise identical");
  omp_set_num_threads(threads);
  return r.outcome();
}

Outcome densities() {
  Report r;
  const double de = 3.0;
  const auto morse = MorseParams::benchmark(de);
  const auto ref = reference_spectrum(morse);
  const auto engine = make_engine(gto_basis());
  const auto sol = engine.solve(de, 60, true);
  const auto matches = match_states(engine.multiplets(sol), ref);
  AxisGrid grid;
  grid.z_max = units::length_from_dho(2.0);
  grid.points = 81;
  const auto z = grid.values();
  auto cut_of = [&](const std::string& label) {
    for (const auto& m : matches)
      if (m.reference.label == label && m.ci)
        return std::pair{evaluate_density_cut(sol, m.ci->members, engine.basis(), engine.space(), grid),
                         reference_density_cut(morse, m.reference, z)};
    throw std::runtime_error("no CI multiplet for " + label);
  };
  const auto [mgs, mgs_ref] = cut_of("MGS");
  Eigen::Index i = 0, j = 0;
  mgs.density.maxCoeff(&i, &j);
  const bool one_sign = (mgs.amplitude.array() >= -1e-6 * mgs.amplitude.cwiseAbs().maxCoeff()).all();
  r.check(one_sign && i == 40 && j == 40, "MGS nodeless, maximum at (" + fmt(units::length_to_dho(z[i]), 2) + ", " +
                                              fmt(units::length_to_dho(z[j]), 2) + ")");
  const double overlap = density_overlap(mgs.density, mgs_ref.density);
  r.check(overlap >= 0.995, "MGS CI/reference overlap " + fmt(overlap, 5));

  const auto ms1 = cut_of("MS1").first;
  double anti = 0.0;
  for (double v : ms1.antidiagonal_amplitude) anti = std::max(anti, std::abs(v));
  const double rel = anti / ms1.amplitude.cwiseAbs().maxCoeff();
  r.check(rel < 1e-8, "MS1 antidiagonal amplitude " + sci(rel) + " of its maximum");

  const auto ms2 = cut_of("MS2").first;
  const int nodes = count_nodes(ms2.diagonal_amplitude);
  r.check(nodes == 2, "MS2 diagonal nodes " + std::to_string(nodes));
  return r.outcome();
}

}  // namespace

int main(int argc, char** argv) {
  ensure_reliable_blas(argc, argv);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"poles", poles},
      {"scattering_lengths", scattering_lengths},
      {"reference_levels", reference_levels},
      {"ci_gto", ci_gto},
      {"ci_gto2", ci_gto2},
      {"binding_errors", binding_errors},
      {"variational_ladder", variational_ladder},
      {"configuration_counts", configuration_counts},
      {"route_agreement", route_agreement},
      {"integral_oracles", integral_oracles},
      {"depth_linearity", depth_linearity},
      {"runtime_and_determinism", runtime_and_determinism},
      {"densities", densities},
  };
  if (argc != 2) {
    std::cerr << "usage: acceptance <criterion|all>\n";
    for (const auto& c : criteria) std::cerr << "  " << c.first << '\n';
    return 2;
  }
  const std::string want = argv[1];
  bool any = false, all_pass = true;
  for (const auto& [name, run] : criteria) {
    if (want != "all" && want != name) continue;
    any = true;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    all_pass = all_pass && o.pass;
  }
  if (!any) {
    std::cerr << "unknown criterion '" << want << "'\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}
