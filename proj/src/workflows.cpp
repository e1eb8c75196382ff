#include "gtoci/workflows.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include "gtoci/csv.hpp"
#include "gtoci/errors.hpp"
#include "gtoci/units.hpp"

namespace gtoci {

namespace {

namespace fs = std::filesystem;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x) { return format_number(x); }
std::string num(long long x) { return std::to_string(x); }

fs::path prepare_out(const RunConfig& c) {
  fs::create_directories(c.out_dir);
  return c.out_dir;
}

std::string with_depth(double depth_hw, const std::string& what) {
  std::ostringstream msg;
  msg << "De = " << depth_hw << " hbar*omega: " << what;
  return msg.str();
}

int sector_key(int L, int parity) { return 2 * L + (parity < 0 ? 1 : 0); }

}  // namespace

std::vector<MatchedState> match_states(const std::vector<Multiplet>& multiplets, const ReferenceResult& reference) {
  std::map<int, std::vector<const Multiplet*>> ci_sectors;
  for (const auto& m : multiplets)
    if (m.L >= 0 && m.parity != 0) ci_sectors[sector_key(m.L, m.parity)].push_back(&m);
  std::map<int, int> rank;
  std::vector<MatchedState> out;
  for (const auto& level : reference.levels) {
    const int key = sector_key(level.L, level.parity);
    const int k = rank[key]++;
    if (level.label.empty()) continue;
    MatchedState s{level, std::nullopt};
    const auto it = ci_sectors.find(key);
    if (it != ci_sectors.end() && k < static_cast<int>(it->second.size())) s.ci = *it->second[k];
    out.push_back(std::move(s));
  }
  return out;
}

CiEngine::CiEngine(BasisSet basis, const TrapParams& trap, const MorseParams& shape, const Options& options)
    : basis_(std::move(basis)), options_(options) {
  const MorseParams unit = shape.with_depth(1.0);
  space_ = enumerate_configurations(basis_.size());

  auto t0 = std::chrono::steady_clock::now();
  IntegralTensor tensor;
  fs::path cache;
  if (!options_.cache_dir.empty()) {
    fs::create_directories(options_.cache_dir);
    cache = options_.cache_dir / integral_cache_name(basis_, unit, options_.integral_threshold);
    if (fs::exists(cache)) {
      tensor = load_integral_cache(cache, basis_, unit, options_.integral_threshold);
      timings_.cache_hit = true;
    }
  }
  if (!timings_.cache_hit) {
    tensor = build_integral_tensor(basis_, unit, options_.integral_threshold, options_.mode);
    if (!cache.empty()) save_integral_cache(cache, tensor, basis_);
  }
  timings_.integrals_s = seconds_since(t0);
  timings_.nonzero_integrals = tensor.nonzero_count();

  t0 = std::chrono::steady_clock::now();
  const auto one_body = one_body_matrices(basis_, trap);
  S_ = assemble_overlap(space_, one_body.overlap, options_.mode);
  H1_ = assemble_one_body(space_, one_body.overlap, one_body.core, options_.mode);
  HU_ = assemble_two_body(space_, tensor, options_.mode);
  timings_.assembly_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  factorization_ = factorize_overlap(S_, options_.lindep);
  if (options_.route == SolverRoute::canonical_orthogonalization) {
    reduced_H1_ = reduce(factorization_, H1_);
    reduced_HU_ = reduce(factorization_, HU_);
    H1_.resize(0, 0);
    HU_.resize(0, 0);
  }
  timings_.factorization_s = seconds_since(t0);
}

CiSolution CiEngine::solve(double depth_hw, Eigen::Index count, bool vectors) const {
  if (!(depth_hw >= 0.0)) throw InvalidParameter("Morse depth De must be >= 0");
  const double de = units::energy_from_hw(depth_hw);
  CiSolution sol;
  if (options_.route == SolverRoute::canonical_orthogonalization) {
    sol = solve_reduced(factorization_, reduced_H1_ + de * reduced_HU_, vectors, count);
  } else {
    sol = solve_congruence(factorization_, H1_ + de * HU_, S_, vectors);
    if (count > 0 && count < sol.energies.size()) {
      sol.energies.conservativeResize(count);
      if (vectors) sol.coefficients.conservativeResize(Eigen::NoChange, count);
    }
  }
  sol.energies /= units::hbar_omega;
  return sol;
}

std::vector<Multiplet> CiEngine::multiplets(const CiSolution& sol) const {
  return find_multiplets(sol, S_, space_, basis_);
}

CiEngine::Options engine_options(const RunConfig& config) {
  CiEngine::Options o;
  o.lindep = config.solver.lindep;
  o.route = config.solver.route == "congruence" ? SolverRoute::congruence : SolverRoute::canonical_orthogonalization;
  o.integral_threshold = config.solver.integral_threshold;
  o.cache_dir = config.cache_dir;
  return o;
}

ReferenceOptions reference_options(const RunConfig& config) {
  ReferenceOptions o;
  o.n_points = config.reference.n_points;
  o.r_max = units::length_from_dho(config.reference.r_max_dho);
  o.n_com_max = config.reference.n_com_max;
  return o;
}

namespace {

void require_harmonic(const RunConfig& c, const char* workflow) {
  if (c.trap.kind != "harmonic")
    throw ConfigurationError(std::string(workflow) + " needs the harmonic trap (the reference separates only there)");
}

/// d_ho / a_s; the non-interacting limit is reached from a_s -> 0-.
double inverse(double as_dho) { return as_dho == 0.0 ? -std::numeric_limits<double>::infinity() : 1.0 / as_dho; }

}  // namespace

std::vector<fs::path> run_scatter(const RunConfig& config) {
  const auto dir = prepare_out(config);
  const auto& s = config.scatter;
  if (s.points < 1 || s.hi < s.lo) throw ConfigurationError("scatter needs a non-empty De range");
  const fs::path curve = dir / "scattering.csv";
  CsvWriter out(curve, {"De_hw", "as_dho"});
  for (int i = 0; i < s.points; ++i) {
    const double de = s.points == 1 ? s.lo : s.lo + (s.hi - s.lo) * i / (s.points - 1);
    try {
      out.row({num(de), num(scattering_length(config.morse_params(de)).as_dho)});
    } catch (const std::exception& e) {
      throw ConvergenceError(with_depth(de, e.what()));
    }
  }
  out.close();
  const fs::path poles = dir / "poles.csv";
  const auto search = pole_positions(config.morse_params(), s.pole_lo, s.pole_hi, s.pole_count);
  CsvWriter p(poles, {"index", "De_hw"});
  for (std::size_t i = 0; i < search.poles_hw.size(); ++i)
    p.row({num(static_cast<long long>(i)), num(search.poles_hw[i])});
  p.close();
  return {curve, poles};
}

std::vector<fs::path> run_reference(const RunConfig& config) {
  require_harmonic(config, "reference");
  const auto dir = prepare_out(config);
  const fs::path path = dir / "reference.csv";
  CsvWriter out(path, {"De_hw", "label", "L", "E_hw"});
  for (double de : config.sweep_depths()) {
    try {
      const auto ref = reference_spectrum(config.morse_params(de), reference_options(config));
      for (const auto& l : ref.levels)
        if (!l.label.empty()) out.row({num(de), l.label, num(static_cast<long long>(l.L)), num(l.energy)});
    } catch (const std::exception& e) {
      throw ConvergenceError(with_depth(de, e.what()));
    }
  }
  out.close();
  return {path};
}

std::vector<fs::path> run_ci(const RunConfig& config) {
  const auto dir = prepare_out(config);
  const double de = config.morse.depth_hw;
  const auto start = std::chrono::steady_clock::now();
  std::optional<CiEngine> engine;
  try {
    engine.emplace(config.basis_set(), config.trap_params(), config.morse_params(), engine_options(config));
  } catch (const std::exception& e) {
    throw SolverError(std::string("setup (integrals/assembly/factorization): ") + e.what());
  }
  auto t0 = std::chrono::steady_clock::now();
  CiSolution sol;
  try {
    sol = engine->solve(de, config.solver.report_states, false);
  } catch (const std::exception& e) {
    throw SolverError(std::string("solve: ") + with_depth(de, e.what()));
  }
  const double solve_s = seconds_since(t0);
  const auto scatter = scattering_length(config.morse_params(de));

  const fs::path spectrum = dir / "spectrum.csv";
  CsvWriter out(spectrum, {"De_hw", "as_dho", "inv_as", "state_index", "cluster_id", "L_guess", "E_hw"});
  const auto clusters = classify_states(sol.energies, config.solver.degeneracy_tol);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (auto i : clusters[c].members)
      out.row({num(de), num(scatter.as_dho), num(inverse(scatter.as_dho)), num(static_cast<long long>(i)),
               num(static_cast<long long>(c)), num(static_cast<long long>(clusters[c].L_guess)),
               num(sol.energies(i))});
  out.close();

  const auto& t = engine->timings();
  const fs::path timing = dir / "timing.csv";
  CsvWriter tm(timing, {"N_GTO", "N_CF", "kept_dimension", "nonzero_integrals", "cache_hit", "integrals_s",
                        "assembly_s", "factorization_s", "solve_s", "total_s"});
  tm.row({num(static_cast<long long>(engine->basis().size())), num(static_cast<long long>(engine->space().size())),
          num(static_cast<long long>(sol.kept_dimension)), num(static_cast<long long>(t.nonzero_integrals)),
          t.cache_hit ? "1" : "0", num(t.integrals_s), num(t.assembly_s), num(t.factorization_s), num(solve_s),
          num(seconds_since(start))});
  tm.close();
  return {spectrum, timing};
}

std::vector<fs::path> run_sweep(const RunConfig& config) {
  require_harmonic(config, "sweep");
  const auto depths = config.sweep_depths();
  if (depths.empty()) throw ConfigurationError("sweep needs at least one De value");
  const auto dir = prepare_out(config);
  const CiEngine engine(config.basis_set(), config.trap_params(), config.morse_params(), engine_options(config));

  const fs::path spectrum = dir / "sweep_spectrum.csv";
  const fs::path states = dir / "sweep_states.csv";
  const fs::path errors = dir / "sweep_errors.csv";
  CsvWriter spec(spectrum, {"De_hw", "as_dho", "inv_as", "state_index", "cluster_id", "L_guess", "E_hw"});
  CsvWriter st(states, {"De_hw", "as_dho", "inv_as", "label", "L", "parity", "E_ci_hw", "E_ref_hw", "deviation_hw"});
  CsvWriter err(errors, {"De_hw", "stage", "message"});
  for (double de : depths) {
    std::string stage = "scattering";
    try {
      const auto scatter = scattering_length(config.morse_params(de));
      const double inv = inverse(scatter.as_dho);
      stage = "reference";
      const auto ref = reference_spectrum(config.morse_params(de), reference_options(config));
      stage = "ci";
      const auto sol = engine.solve(de, config.solver.report_states, true);
      const auto clusters = classify_states(sol.energies, config.solver.degeneracy_tol);
      for (std::size_t c = 0; c < clusters.size(); ++c)
        for (auto i : clusters[c].members)
          spec.row({num(de), num(scatter.as_dho), num(inv), num(static_cast<long long>(i)),
                    num(static_cast<long long>(c)), num(static_cast<long long>(clusters[c].L_guess)),
                    num(sol.energies(i))});
      stage = "matching";
      for (const auto& m : match_states(engine.multiplets(sol), ref)) {
        const auto& r = m.reference;
        if (!m.ci) {
          err.row({num(de), stage, "no CI multiplet for " + r.label});
          continue;
        }
        st.row({num(de), num(scatter.as_dho), num(inv), r.label, num(static_cast<long long>(r.L)),
                num(static_cast<long long>(r.parity)), num(m.ci->energy), num(r.energy), num(m.ci->energy - r.energy)});
      }
    } catch (const std::exception& e) {
      std::string msg = e.what();
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      err.row({num(de), stage, msg});
    }
  }
  spec.close();
  st.close();
  err.close();
  return {spectrum, states, errors};
}

std::vector<fs::path> run_converge(const RunConfig& config) {
  require_harmonic(config, "converge");
  const auto dir = prepare_out(config);
  std::vector<std::pair<double, double>> refs;
  std::vector<double> as;
  for (double de : config.converge.depths) {
    try {
      refs.emplace_back(de, reference_spectrum(config.morse_params(de), reference_options(config)).find("MGS").energy);
      as.push_back(scattering_length(config.morse_params(de)).as_dho);
    } catch (const std::exception& e) {
      throw ConvergenceError(with_depth(de, e.what()));
    }
  }
  const fs::path path = dir / "converge.csv";
  CsvWriter out(path, {"N_GTO", "De_hw", "as_dho", "E_hw", "E_minus_Eref_hw", "binding_rel_error_pct"});
  for (const auto& rung : config.converge.rungs) {
    const CiEngine engine(named_basis(rung), config.trap_params(), config.morse_params(), engine_options(config));
    for (std::size_t k = 0; k < refs.size(); ++k) {
      const auto [de, e_ref] = refs[k];
      const double e = engine.solve(de, 1, false).energies(0);
      const double e_trap = units::noninteracting_ground_energy / units::hbar_omega;
      const double rel = 100.0 * ((e_trap - e_ref) - (e_trap - e)) / (e_trap - e_ref);
      out.row({num(static_cast<long long>(engine.basis().size())), num(de), num(as[k]), num(e), num(e - e_ref),
               num(rel)});
    }
  }
  out.close();
  return {path};
}

std::vector<fs::path> run_density(const RunConfig& config) {
  require_harmonic(config, "density");
  const auto dir = prepare_out(config);
  const double de = config.morse.depth_hw;
  const auto morse = config.morse_params(de);
  const auto ropts = reference_options(config);
  const auto ref = reference_spectrum(morse, ropts);
  for (const auto& label : config.density.states) ref.find(label);

  const CiEngine engine(config.basis_set(), config.trap_params(), config.morse_params(), engine_options(config));
  const auto sol = engine.solve(de, config.solver.report_states, true);
  const auto matches = match_states(engine.multiplets(sol), ref);

  AxisGrid grid;
  grid.z_max = units::length_from_dho(config.density.z_max_dho);
  grid.points = config.density.points;
  const auto z = grid.values();
  const double rho_scale = units::density6_to_dho(1.0);

  std::vector<fs::path> written;
  const fs::path summary = dir / "density_summary.csv";
  CsvWriter sum(summary, {"label", "L", "E_ci_hw", "E_ref_hw", "overlap", "diagonal_nodes", "antidiagonal_nodes"});
  for (const auto& label : config.density.states) {
    const auto it = std::find_if(matches.begin(), matches.end(), [&](const auto& m) { return m.reference.label == label; });
    if (it == matches.end() || !it->ci)
      throw SolverError("no CI multiplet matches reference state " + label + " within the reported states");
    const auto ci_cut = evaluate_density_cut(sol, it->ci->members, engine.basis(), engine.space(), grid);
    const auto ref_cut = reference_density_cut(morse, it->reference, z, ropts);
    for (const auto& [tag, cut] : {std::pair{"ci", &ci_cut}, std::pair{"ref", &ref_cut}}) {
      const fs::path field = dir / ("density_" + label + "_" + tag + ".csv");
      CsvWriter f(field, {"z1_dho", "z2_dho", "density"});
      for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = 0; j < z.size(); ++j)
          f.row({num(units::length_to_dho(z[i])), num(units::length_to_dho(z[j])),
                 num(cut->density(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * rho_scale)});
      f.close();
      const fs::path cuts = dir / ("cuts_" + label + "_" + tag + ".csv");
      CsvWriter c(cuts, {"z_dho", "diagonal", "antidiagonal"});
      for (std::size_t i = 0; i < z.size(); ++i)
        c.row({num(units::length_to_dho(z[i])), num(cut->diagonal[i] * rho_scale),
               num(cut->antidiagonal[i] * rho_scale)});
      c.close();
      written.push_back(field);
      written.push_back(cuts);
    }
    sum.row({label, num(static_cast<long long>(it->reference.L)), num(it->ci->energy), num(it->reference.energy),
             num(density_overlap(ci_cut.density, ref_cut.density)),
             num(static_cast<long long>(count_nodes(ci_cut.diagonal_amplitude))),
             num(static_cast<long long>(count_nodes(ci_cut.antidiagonal_amplitude)))});
  }
  sum.close();
  written.push_back(summary);
  return written;
}

}  // namespace gtoci
