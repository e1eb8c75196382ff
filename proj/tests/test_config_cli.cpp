#include <catch_amalgamated.hpp>
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtoci/config.hpp"
#include "gtoci/csv.hpp"
#include "gtoci/errors.hpp"
#include "gtoci/workflows.hpp"

using namespace gtoci;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "gtoci_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(GTOCI_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("configuration defaults and JSON round trip", "[config]") {
  RunConfig c;
  CHECK(c.morse.depth_hw == 3.0);
  const auto m = c.morse_params();
  const auto b = MorseParams::benchmark(3.0);
  CHECK(std::abs(m.r_min - b.r_min) < 1e-15);
  CHECK(std::abs(m.stiffness - b.stiffness) < 1e-13);
  CHECK(c.basis_set().size() == 80);
  const auto text = c.to_json_text();
  CHECK(RunConfig::from_json_text(text).to_json_text() == text);

  RunConfig custom = RunConfig::from_json_text(R"({
    "morse": {"De": 5.5},
    "basis": {"name": "pair", "shells": [{"sigma": 0, "exponents": [0.5, 1.0]},
                                          {"sigma": 1, "exponents": [0.7], "center": [0, 0, 0.25]}]},
    "solver": {"route": "congruence"},
    "sweep": {"values": [1, 2]},
    "threads": 2
  })");
  CHECK(custom.morse.depth_hw == 5.5);
  CHECK(custom.basis_set().size() == 5);
  CHECK(std::abs(custom.basis_set()[2].center()[2] - 0.25 * units::d_ho) < 1e-15);
  CHECK(custom.sweep_depths() == std::vector<double>{1.0, 2.0});
  CHECK(RunConfig::from_json_text(custom.to_json_text()).to_json_text() == custom.to_json_text());
}

TEST_CASE("configuration errors", "[config]") {
  CHECK_THROWS_WITH(RunConfig::from_json_text(R"({"morse": {"Dee": 3}})"), Catch::Matchers::ContainsSubstring("Dee"));
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"bogus": 1})"), ConfigurationError);
  CHECK_THROWS_AS(RunConfig::from_json_text("{not json"), ConfigurationError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"morse": {"De": "deep"}})"), ConfigurationError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"solver": {"route": "magic"}})").validate(), ConfigurationError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"trap": {"kind": "box"}})").validate(), ConfigurationError);
  CHECK_THROWS_AS(RunConfig::from_json_text(R"({"basis": {"shells": [{"sigma": 0, "exponents": [0.5, 0.5]}]}})")
                      .basis_set(),
                  ConfigurationError);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/config.json"), ConfigurationError);
}

TEST_CASE("geometric depth grid", "[config]") {
  RunConfig c;
  const auto d = c.sweep_depths();
  REQUIRE(d.size() == 60);
  CHECK(std::abs(d.front() - 0.5) < 1e-14);
  CHECK(std::abs(d.back() - 15.0) < 1e-12);
  for (std::size_t k = 2; k < d.size(); ++k) CHECK(std::abs(d[k] / d[k - 1] - d[1] / d[0]) < 1e-12);
}

TEST_CASE("csv writer", "[config]") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(-2.5e-20) == "-2.5e-20");
  const auto dir = scratch("csv");
  CsvWriter w(dir / "t.csv", {"a", "b"});
  w.row({"1", "2"});
  CHECK_THROWS(w.row({"1"}));
  w.close();
  CHECK(slurp(dir / "t.csv") == "a,b\n1,2\n");
}

TEST_CASE("workflows write deterministic CSV files", "[config]") {
  RunConfig c;
  c.basis.name = "sp";
  c.sweep.values = {3.0, 10.0};
  c.scatter.points = 5;
  c.scatter.pole_hi = 30.0;
  c.converge.depths = {3.0};
  c.converge.rungs = {"s", "sp"};
  c.density.points = 11;
  c.density.states = {"MGS"};
  c.out_dir = scratch("run1");
  const auto a = run_scatter(c);
  REQUIRE(a.size() == 2);
  CHECK(first_line(a[0]) == "De_hw,as_dho");
  CHECK(first_line(a[1]) == "index,De_hw");
  const auto ci = run_ci(c);
  CHECK(first_line(ci[0]) == "De_hw,as_dho,inv_as,state_index,cluster_id,L_guess,E_hw");
  const auto sweep = run_sweep(c);
  const auto conv = run_converge(c);
  CHECK(first_line(conv[0]) == "N_GTO,De_hw,as_dho,E_hw,E_minus_Eref_hw,binding_rel_error_pct");
  const auto dens = run_density(c);
  CHECK(std::find(dens.begin(), dens.end(), c.out_dir / "density_MGS_ci.csv") != dens.end());
  CHECK(std::find(dens.begin(), dens.end(), c.out_dir / "cuts_MGS_ref.csv") != dens.end());

  RunConfig again = c;
  again.out_dir = scratch("run2");
  run_scatter(again);
  run_sweep(again);
  for (const char* name : {"scattering.csv", "poles.csv", "sweep_spectrum.csv", "sweep_states.csv"})
    CHECK(slurp(c.out_dir / name) == slurp(again.out_dir / name));
  CHECK(first_line(c.out_dir / "sweep_states.csv") ==
        "De_hw,as_dho,inv_as,label,L,parity,E_ci_hw,E_ref_hw,deviation_hw");
}

TEST_CASE("reference workflows need the harmonic trap", "[config]") {
  RunConfig c = RunConfig::from_json_text(
      R"({"trap": {"kind": "gaussian_wells", "wells": [{"center": [0, 0, 0], "depth": 5, "width": 1}]},
          "basis": {"name": "s"}})");
  c.out_dir = scratch("wells");
  CHECK_THROWS_AS(run_reference(c), ConfigurationError);
  CHECK_THROWS_AS(run_density(c), ConfigurationError);
  CHECK_NOTHROW(run_ci(c));
}

TEST_CASE("command line exit codes", "[cli]") {
  const auto dir = scratch("cli");
  const auto log = dir / "log.txt";
  CHECK(run_cli("", log) != 0);
  CHECK(run_cli("frobnicate", log) != 0);
  CHECK(run_cli("ci --basis nonsense --out " + dir.string(), log) == 1);
  CHECK(slurp(log).rfind("gtoci: ", 0) == 0);
  CHECK(run_cli("ci --config /nonexistent.json", log) != 0);
  std::ofstream(dir / "bad.json") << R"({"morse": {"Dee": 3}})";
  CHECK(run_cli("ci --config " + (dir / "bad.json").string(), log) == 1);
  CHECK(slurp(log).find("Dee") != std::string::npos);
  CHECK(run_cli("scatter --De 3 --out " + dir.string(), log) == 0);
  CHECK(fs::exists(dir / "scattering.csv"));
  CHECK(slurp(log).find("scattering.csv") != std::string::npos);
  CHECK(run_cli("ci --basis s --De 5 --threads 1 --out " + dir.string(), log) == 0);
  CHECK(fs::exists(dir / "spectrum.csv"));
}
