#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gtoci/ci.hpp"
#include "gtoci/config.hpp"
#include "gtoci/reference.hpp"

namespace gtoci {

/// CI multiplet assigned to a labelled reference level: within each
/// (L, parity) sector the k-th CI multiplet is paired with the k-th
/// reference level.
struct MatchedState {
  ReferenceLevel reference;
  std::optional<Multiplet> ci;
};

std::vector<MatchedState> match_states(const std::vector<Multiplet>& multiplets, const ReferenceResult& reference);

struct CiTimings {
  double integrals_s = 0.0;
  double assembly_s = 0.0;
  double factorization_s = 0.0;
  std::size_t nonzero_integrals = 0;
  bool cache_hit = false;
};

/// Builds everything that does not depend on De once: integrals at unit
/// depth, H = H1 + De H_U with the overlap factorization and (canonical
/// route) the reduced H1 and H_U.  Each solve is then a single dense
/// eigensolve.
class CiEngine {
 public:
  struct Options {
    double lindep = 1e-10;
    SolverRoute route = SolverRoute::canonical_orthogonalization;
    double integral_threshold = 1e-14;
    std::filesystem::path cache_dir;
    Parallelism mode = Parallelism::openmp;
  };

  CiEngine(BasisSet basis, const TrapParams& trap, const MorseParams& shape, const Options& options);

  /// Lowest count states (all kept states when count <= 0).
  CiSolution solve(double depth_hw, Eigen::Index count = -1, bool vectors = true) const;

  const BasisSet& basis() const { return basis_; }
  const ConfigurationSpace& space() const { return space_; }
  const Eigen::MatrixXd& overlap() const { return S_; }
  const OverlapFactorization& factorization() const { return factorization_; }
  const CiTimings& timings() const { return timings_; }
  std::vector<Multiplet> multiplets(const CiSolution& sol) const;

 private:
  BasisSet basis_;
  Options options_;
  ConfigurationSpace space_;
  Eigen::MatrixXd S_;
  Eigen::MatrixXd H1_;
  Eigen::MatrixXd HU_;
  OverlapFactorization factorization_;
  Eigen::MatrixXd reduced_H1_;
  Eigen::MatrixXd reduced_HU_;
  CiTimings timings_;
};

CiEngine::Options engine_options(const RunConfig& config);
ReferenceOptions reference_options(const RunConfig& config);

/// Each workflow writes its CSV files into config.out_dir (created when
/// missing) and returns the paths written.
std::vector<std::filesystem::path> run_scatter(const RunConfig& config);
std::vector<std::filesystem::path> run_reference(const RunConfig& config);
std::vector<std::filesystem::path> run_ci(const RunConfig& config);
std::vector<std::filesystem::path> run_sweep(const RunConfig& config);
std::vector<std::filesystem::path> run_converge(const RunConfig& config);
std::vector<std::filesystem::path> run_density(const RunConfig& config);

}  // namespace gtoci
