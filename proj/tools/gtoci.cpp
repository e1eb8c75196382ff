#include <omp.h>

#include <CLI11.hpp>
#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "gtoci/blas_guard.hpp"
#include "gtoci/config.hpp"
#include "gtoci/workflows.hpp"

extern "C" void openblas_set_num_threads(int);

int main(int argc, char** argv) {
  gtoci::ensure_reliable_blas(argc, argv);

  CLI::App app{"Two-boson full CI in a Cartesian Gaussian basis with a Morse interaction"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::string basis;
  std::optional<double> depth;
  int threads = -1;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--threads", threads, "Worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
  app.add_option("--basis", basis, "Named basis: GTO, GTO-2, s, sp, spd, spdf");
  app.add_option("--De", depth, "Morse depth in hbar*omega; overrides every De setting")->check(CLI::NonNegativeNumber);

  using Workflow = std::function<std::vector<std::filesystem::path>(const gtoci::RunConfig&)>;
  const std::map<std::string, std::pair<std::string, Workflow>> workflows = {
      {"scatter", {"Scattering length a_s(De) and its poles", gtoci::run_scatter}},
      {"reference", {"Reference spectra from the relative/center-of-mass separation", gtoci::run_reference}},
      {"ci", {"One CI solve: spectrum and timing", gtoci::run_ci}},
      {"sweep", {"CI and reference energies over a De grid", gtoci::run_sweep}},
      {"converge", {"Ground energy along the s, sp, spd, spdf basis ladder", gtoci::run_converge}},
      {"density", {"Density cuts of labelled states, CI and reference", gtoci::run_density}},
  };
  for (const auto& [name, entry] : workflows) app.add_subcommand(name, entry.first);

  CLI11_PARSE(app, argc, argv);

  try {
    gtoci::RunConfig config = config_path.empty() ? gtoci::RunConfig{} : gtoci::RunConfig::load(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (!basis.empty()) {
      config.basis.name = basis;
      config.basis.shells.clear();
    }
    if (threads >= 0) config.threads = threads;
    if (depth) {
      config.morse.depth_hw = *depth;
      config.sweep.values = {*depth};
      config.converge.depths = {*depth};
      config.scatter.lo = config.scatter.hi = *depth;
      config.scatter.points = 1;
    }
    config.validate();
    if (config.threads > 0) {
      omp_set_num_threads(config.threads);
      openblas_set_num_threads(config.threads);
    }
    const auto* sub = app.get_subcommands().front();
    for (const auto& path : workflows.at(sub->get_name()).second(config)) std::cout << path.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "gtoci: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
