#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gtoci/basis.hpp"
#include "gtoci/integral_tensor.hpp"
#include "gtoci/one_body.hpp"

namespace gtoci {

/// Symmetric two-boson configurations Phi_ab = phi_a(1) phi_b(2) + phi_b(1) phi_a(2), a <= b,
/// kept unnormalized.  Ordered by b, then a, so the index of (a, b) is pair_index(a, b).
struct ConfigurationSpace {
  std::size_t n_basis = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;

  std::size_t size() const { return pairs.size(); }
};

ConfigurationSpace enumerate_configurations(std::size_t n_basis);

struct CiMatrices {
  Eigen::MatrixXd H;
  Eigen::MatrixXd S;
};

/// S_{ab,cd} = 2 (s_ac s_bd + s_ad s_bc)
Eigen::MatrixXd assemble_overlap(const ConfigurationSpace& space, const Eigen::MatrixXd& s,
                                 Parallelism mode = Parallelism::openmp);
/// 2 (h_ac s_bd + s_ac h_bd + h_ad s_bc + s_ad h_bc)
Eigen::MatrixXd assemble_one_body(const ConfigurationSpace& space, const Eigen::MatrixXd& s,
                                  const Eigen::MatrixXd& h, Parallelism mode = Parallelism::openmp);
/// 2 (I(a,b,c,d) + I(a,b,d,c))
Eigen::MatrixXd assemble_two_body(const ConfigurationSpace& space, const IntegralTensor& tensor,
                                  Parallelism mode = Parallelism::openmp);

CiMatrices assemble(const ConfigurationSpace& space, const OneBodyMatrices& one_body, const IntegralTensor& tensor,
                    Parallelism mode = Parallelism::openmp);

enum class SolverRoute { canonical_orthogonalization, congruence };

struct CiSolution {
  /// Ascending, hbar*omega.
  Eigen::VectorXd energies;
  /// One S-normalized column per state over the configuration space.
  Eigen::MatrixXd coefficients;
  Eigen::Index kept_dimension = 0;
  double smallest_overlap_eigenvalue = 0.0;
  SolverRoute route = SolverRoute::canonical_orthogonalization;
};

/// Eigen-decomposition of S reduced to its well-conditioned subspace; reusable
/// for every Hamiltonian on the same configuration space.
struct OverlapFactorization {
  /// N x K, columns v_i / sqrt(lambda_i) for the kept overlap eigenpairs.
  Eigen::MatrixXd transform;
  /// X^T S X as computed; the identity up to rounding amplified by the
  /// conditioning of the kept subspace.
  Eigen::MatrixXd metric;
  double max_eigenvalue = 0.0;
  double smallest_eigenvalue = 0.0;
};

/// Drops overlap eigenvalues below lindep * max; throws SolverError when an
/// eigenvalue is negative beyond that threshold.
OverlapFactorization factorize_overlap(const Eigen::MatrixXd& S, double lindep = 1e-10);
CiSolution solve_canonical(const OverlapFactorization& f, const Eigen::MatrixXd& H, bool vectors = true);
/// X^T H X for the transform X of f.
Eigen::MatrixXd reduce(const OverlapFactorization& f, const Eigen::MatrixXd& H);
/// Lowest count eigenpairs of a reduced Hamiltonian (all when count <= 0),
/// back-transformed to the configuration space.
CiSolution solve_reduced(const OverlapFactorization& f, Eigen::MatrixXd reduced, bool vectors = true,
                         Eigen::Index count = -1);
/// Cholesky congruence of the generalized problem (LAPACK dsygvd).
CiSolution solve_congruence(const Eigen::MatrixXd& H, const Eigen::MatrixXd& S, bool vectors = true);
/// Congruence route on the subspace kept by f: the pencil is projected onto
/// the unit-norm kept overlap eigenvectors and handed to dsygvd.  Identical to
/// the full-space call when nothing was pruned.
CiSolution solve_congruence(const OverlapFactorization& f, const Eigen::MatrixXd& H, const Eigen::MatrixXd& S,
                            bool vectors = true);

CiSolution solve(const CiMatrices& m, double lindep = 1e-10,
                 SolverRoute route = SolverRoute::canonical_orthogonalization);

/// Max over columns of |C^T S C - 1|.
double orthonormality_residual(const CiSolution& sol, const Eigen::MatrixXd& S);

struct StateCluster {
  std::vector<Eigen::Index> members;
  double energy = 0.0;
  /// (m-1)/2 for odd multiplicity m, -1 when the multiplicity fits no single L.
  int L_guess = -1;
};

/// Groups consecutive energies closer than tol.
std::vector<StateCluster> classify_states(const Eigen::VectorXd& energies, double degeneracy_tol = 1e-4);

/// An exact rotational multiplet of the CI spectrum, with its parity when the
/// basis is single-center (0 otherwise).
struct Multiplet {
  std::vector<Eigen::Index> members;
  double energy = 0.0;
  int L = -1;
  int parity = 0;
};

/// A trailing group is dropped when the solution holds only the lowest part
/// of the spectrum, since it may be cut mid-multiplet.
std::vector<Multiplet> find_multiplets(const CiSolution& sol, const Eigen::MatrixXd& S,
                                       const ConfigurationSpace& space, const BasisSet& basis,
                                       double tol = 1e-6);

/// Grid on the z axis, absolute units.
struct AxisGrid {
  double z_max = 3.0;
  int points = 121;
  std::vector<double> values() const;
};

/// Psi and |Psi|^2 on the cut x1 = y1 = x2 = y2 = 0 of the symmetric grid,
/// with the diagonal (z1 = z2) and antidiagonal (z1 = -z2) cuts.  Absolute
/// units; Psi is normalized in six dimensions.
struct DensityCut {
  std::vector<double> z;
  Eigen::MatrixXd amplitude;
  Eigen::MatrixXd density;
  std::vector<double> diagonal;
  std::vector<double> antidiagonal;
  std::vector<double> diagonal_amplitude;
  std::vector<double> antidiagonal_amplitude;
};

/// Fills the diagonal/antidiagonal vectors and the density from amplitude,
/// and fixes the sign so the extreme value of Psi on the diagonal is positive.
void finish_density_cut(DensityCut& cut);

/// For a degenerate set of states the member with the largest weight on
/// the cut is taken (top eigenvector of the Gram matrix of their cuts).
DensityCut evaluate_density_cut(const CiSolution& sol, std::span<const Eigen::Index> states, const BasisSet& basis,
                                const ConfigurationSpace& space, const AxisGrid& grid);

/// Cosine similarity of two density fields on the same grid.
double density_overlap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Sign changes of Psi along a 1D cut, ignoring points below rel_floor times
/// the largest |Psi|.
int count_nodes(std::span<const double> amplitude, double rel_floor = 1e-6);

}  // namespace gtoci
