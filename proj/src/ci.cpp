#include "gtoci/ci.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtoci/errors.hpp"

namespace gtoci {

ConfigurationSpace enumerate_configurations(std::size_t n_basis) {
  if (n_basis < 1) throw InvalidParameter("enumerate_configurations: empty basis");
  ConfigurationSpace space;
  space.n_basis = n_basis;
  space.pairs.reserve(n_basis * (n_basis + 1) / 2);
  for (std::uint32_t b = 0; b < n_basis; ++b)
    for (std::uint32_t a = 0; a <= b; ++a) space.pairs.emplace_back(a, b);
  return space;
}

namespace {

void check_dimensions(const ConfigurationSpace& space, Eigen::Index n) {
  if (static_cast<std::size_t>(n) != space.n_basis) {
    throw InvalidParameter("one-particle matrix dimension does not match the configuration space");
  }
}

// Fills the lower triangle row by row and mirrors it; each row writes a
// disjoint set of entries.
template <class F>
Eigen::MatrixXd fill_symmetric(const ConfigurationSpace& space, Parallelism mode, F&& element) {
  const auto n = static_cast<Eigen::Index>(space.size());
  Eigen::MatrixXd m(n, n);
#pragma omp parallel for schedule(dynamic, 16) if (mode == Parallelism::openmp)
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [a, b] = space.pairs[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j <= i; ++j) {
      const auto [c, d] = space.pairs[static_cast<std::size_t>(j)];
      const double v = element(a, b, c, d);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

}  // namespace

Eigen::MatrixXd assemble_overlap(const ConfigurationSpace& space, const Eigen::MatrixXd& s, Parallelism mode) {
  check_dimensions(space, s.rows());
  return fill_symmetric(space, mode, [&](auto a, auto b, auto c, auto d) {
    return 2.0 * (s(a, c) * s(b, d) + s(a, d) * s(b, c));
  });
}

Eigen::MatrixXd assemble_one_body(const ConfigurationSpace& space, const Eigen::MatrixXd& s, const Eigen::MatrixXd& h,
                                  Parallelism mode) {
  check_dimensions(space, s.rows());
  check_dimensions(space, h.rows());
  return fill_symmetric(space, mode, [&](auto a, auto b, auto c, auto d) {
    return 2.0 * (h(a, c) * s(b, d) + s(a, c) * h(b, d) + h(a, d) * s(b, c) + s(a, d) * h(b, c));
  });
}

Eigen::MatrixXd assemble_two_body(const ConfigurationSpace& space, const IntegralTensor& tensor, Parallelism mode) {
  if (tensor.n_basis() != space.n_basis) {
    std::ostringstream msg;
    msg << "integral tensor covers " << tensor.n_basis() << " functions, configuration space "
        << space.n_basis;
    throw InvalidParameter(msg.str());
  }
  return fill_symmetric(space, mode, [&](auto a, auto b, auto c, auto d) {
    return 2.0 * (tensor(a, b, c, d) + tensor(a, b, d, c));
  });
}

CiMatrices assemble(const ConfigurationSpace& space, const OneBodyMatrices& one_body, const IntegralTensor& tensor,
                    Parallelism mode) {
  CiMatrices m;
  m.S = assemble_overlap(space, one_body.overlap, mode);
  m.H = assemble_one_body(space, one_body.overlap, one_body.core, mode);
  m.H += assemble_two_body(space, tensor, mode);
  return m;
}

namespace {

// Symmetric eigen-decomposition in place (LAPACK dsyevd); a holds the
// eigenvectors on return when vectors is set.
Eigen::VectorXd syevd(Eigen::MatrixXd& a, bool vectors, const char* what) {
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(a.rows());
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, a.data(), n, w.data());
  if (info != 0) {
    std::ostringstream msg;
    msg << what << ": dsyevd failed with info = " << info;
    throw SolverError(msg.str());
  }
  return w;
}

}  // namespace

OverlapFactorization factorize_overlap(const Eigen::MatrixXd& S, double lindep) {
  if (S.rows() != S.cols() || S.rows() == 0) throw InvalidParameter("overlap matrix must be square and non-empty");
  Eigen::MatrixXd v = S;
  const Eigen::VectorXd w = syevd(v, true, "overlap");
  OverlapFactorization f;
  f.max_eigenvalue = w.maxCoeff();
  f.smallest_eigenvalue = w.minCoeff();
  const double cutoff = lindep * f.max_eigenvalue;
  if (f.smallest_eigenvalue < -cutoff) {
    std::ostringstream msg;
    msg << "overlap matrix is indefinite: eigenvalue " << f.smallest_eigenvalue << " (largest "
        << f.max_eigenvalue << ")";
    throw SolverError(msg.str());
  }
  Eigen::Index first = 0;
  while (first < w.size() && w(first) < cutoff) ++first;
  const Eigen::Index kept = w.size() - first;
  f.transform = v.rightCols(kept);
  for (Eigen::Index i = 0; i < kept; ++i) f.transform.col(i) /= std::sqrt(w(first + i));
  f.metric = f.transform.transpose() * (S * f.transform);
  f.metric = 0.5 * (f.metric + f.metric.transpose());
  return f;
}

Eigen::MatrixXd reduce(const OverlapFactorization& f, const Eigen::MatrixXd& H) {
  if (H.rows() != f.transform.rows()) throw InvalidParameter("Hamiltonian dimension mismatch");
  Eigen::MatrixXd reduced = f.transform.transpose() * (H * f.transform);
  return 0.5 * (reduced + reduced.transpose());
}

namespace {

// C = X Z (Z^T M Z)^{-1/2}: symmetric re-orthonormalization against the
// computed metric M = X^T S X, which differs from the identity by roughly
// machine epsilon times the condition number of the kept overlap.
Eigen::MatrixXd back_transform(const OverlapFactorization& f, const Eigen::MatrixXd& z) {
  if (f.metric.rows() != z.rows()) return f.transform * z;
  Eigen::MatrixXd g = z.transpose() * (f.metric * z);
  g = 0.5 * (g + g.transpose());
  const Eigen::VectorXd w = syevd(g, true, "state metric");
  if (w.minCoeff() <= 0.0) throw SolverError("state metric is not positive definite");
  const Eigen::MatrixXd inv_sqrt = g * w.cwiseSqrt().cwiseInverse().asDiagonal() * g.transpose();
  return f.transform * (z * inv_sqrt);
}

}  // namespace

CiSolution solve_reduced(const OverlapFactorization& f, Eigen::MatrixXd reduced, bool vectors, Eigen::Index count) {
  const Eigen::Index k = f.transform.cols();
  if (reduced.rows() != k || reduced.cols() != k) throw InvalidParameter("reduced Hamiltonian dimension mismatch");
  CiSolution sol;
  if (count <= 0 || count >= k) {
    sol.energies = syevd(reduced, vectors, "reduced Hamiltonian");
    if (vectors) sol.coefficients = back_transform(f, reduced);
  } else {
    const auto n = static_cast<lapack_int>(k);
    lapack_int found = 0;
    Eigen::VectorXd w(k);
    Eigen::MatrixXd z(vectors ? k : 1, vectors ? count : 1);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
    const lapack_int info =
        LAPACKE_dsyevr(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'I', 'L', n, reduced.data(), n, 0.0, 0.0, 1,
                       static_cast<lapack_int>(count), 0.0, &found, w.data(), z.data(),
                       static_cast<lapack_int>(z.rows()), support.data());
    if (info != 0 || found != count) {
      std::ostringstream msg;
      msg << "reduced Hamiltonian: dsyevr failed with info = " << info;
      throw SolverError(msg.str());
    }
    sol.energies = w.head(count);
    if (vectors) sol.coefficients = back_transform(f, z);
  }
  sol.kept_dimension = k;
  sol.smallest_overlap_eigenvalue = f.smallest_eigenvalue;
  sol.route = SolverRoute::canonical_orthogonalization;
  return sol;
}

CiSolution solve_canonical(const OverlapFactorization& f, const Eigen::MatrixXd& H, bool vectors) {
  return solve_reduced(f, reduce(f, H), vectors);
}

CiSolution solve_congruence(const Eigen::MatrixXd& H, const Eigen::MatrixXd& S, bool vectors) {
  if (H.rows() != S.rows() || H.cols() != S.cols()) throw InvalidParameter("H and S dimensions differ");
  Eigen::MatrixXd a = H;
  Eigen::MatrixXd b = S;
  const auto n = static_cast<lapack_int>(a.rows());
  Eigen::VectorXd w(a.rows());
  const lapack_int info =
      LAPACKE_dsygvd(LAPACK_COL_MAJOR, 1, vectors ? 'V' : 'N', 'L', n, a.data(), n, b.data(), n, w.data());
  if (info > n) {
    std::ostringstream msg;
    msg << "overlap matrix is not numerically positive definite (leading minor " << info - n << ")";
    throw SolverError(msg.str());
  }
  if (info != 0) {
    std::ostringstream msg;
    msg << "dsygvd failed with info = " << info;
    throw SolverError(msg.str());
  }
  CiSolution sol;
  sol.energies = w;
  if (vectors) sol.coefficients = std::move(a);
  sol.kept_dimension = w.size();
  sol.route = SolverRoute::congruence;
  return sol;
}

CiSolution solve_congruence(const OverlapFactorization& f, const Eigen::MatrixXd& H, const Eigen::MatrixXd& S,
                            bool vectors) {
  if (f.transform.cols() == S.cols()) return solve_congruence(H, S, vectors);
  Eigen::MatrixXd basis = f.transform;
  basis.colwise().normalize();
  Eigen::MatrixXd hk = basis.transpose() * (H * basis);
  Eigen::MatrixXd sk = basis.transpose() * (S * basis);
  hk = 0.5 * (hk + hk.transpose()).eval();
  sk = 0.5 * (sk + sk.transpose()).eval();
  CiSolution sol = solve_congruence(hk, sk, vectors);
  if (vectors) sol.coefficients = basis * sol.coefficients;
  sol.smallest_overlap_eigenvalue = f.smallest_eigenvalue;
  return sol;
}

CiSolution solve(const CiMatrices& m, double lindep, SolverRoute route) {
  const OverlapFactorization f = factorize_overlap(m.S, lindep);
  if (route == SolverRoute::congruence) return solve_congruence(f, m.H, m.S);
  return solve_canonical(f, m.H);
}

double orthonormality_residual(const CiSolution& sol, const Eigen::MatrixXd& S) {
  const Eigen::MatrixXd g = sol.coefficients.transpose() * S * sol.coefficients;
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

std::vector<StateCluster> classify_states(const Eigen::VectorXd& energies, double degeneracy_tol) {
  std::vector<StateCluster> out;
  for (Eigen::Index i = 0; i < energies.size(); ++i) {
    if (out.empty() || energies(i) - energies(out.back().members.back()) >= degeneracy_tol) out.emplace_back();
    out.back().members.push_back(i);
  }
  for (auto& c : out) {
    double sum = 0.0;
    for (auto i : c.members) sum += energies(i);
    c.energy = sum / static_cast<double>(c.members.size());
    const auto m = static_cast<int>(c.members.size());
    c.L_guess = m % 2 ? (m - 1) / 2 : -1;
  }
  return out;
}

std::vector<Multiplet> find_multiplets(const CiSolution& sol, const Eigen::MatrixXd& S,
                                       const ConfigurationSpace& space, const BasisSet& basis, double tol) {
  std::vector<Multiplet> out;
  const auto& e = sol.energies;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    const double scale = std::max(1.0, std::abs(e(i)));
    if (out.empty() || e(i) - e(out.back().members.back()) >= tol * scale) out.emplace_back();
    out.back().members.push_back(i);
  }
  if (e.size() < sol.kept_dimension && !out.empty()) out.pop_back();
  Eigen::VectorXd parity;
  const bool with_parity = basis.single_center() && sol.coefficients.cols() == e.size();
  if (with_parity) {
    parity.resize(static_cast<Eigen::Index>(space.size()));
    for (std::size_t j = 0; j < space.size(); ++j) {
      const auto [a, b] = space.pairs[j];
      parity(static_cast<Eigen::Index>(j)) = (basis[a].sigma() + basis[b].sigma()) % 2 ? -1.0 : 1.0;
    }
  }
  for (auto& m : out) {
    double sum = 0.0;
    for (auto i : m.members) sum += e(i);
    m.energy = sum / static_cast<double>(m.members.size());
    const auto size = static_cast<int>(m.members.size());
    m.L = size % 2 ? (size - 1) / 2 : -1;
    if (with_parity) {
      const auto c = sol.coefficients.col(m.members.front());
      const double p = c.cwiseProduct(parity).dot(S * c);
      m.parity = p > 0.5 ? 1 : (p < -0.5 ? -1 : 0);
    }
  }
  return out;
}

std::vector<double> AxisGrid::values() const {
  if (points < 2 || !(z_max > 0.0)) throw InvalidParameter("density grid needs >= 2 points and z_max > 0");
  std::vector<double> z(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) z[i] = -z_max + 2.0 * z_max * i / (points - 1);
  return z;
}

void finish_density_cut(DensityCut& cut) {
  const auto g = cut.amplitude.rows();
  Eigen::Index arg = 0;
  for (Eigen::Index i = 0; i < g; ++i)
    if (std::abs(cut.amplitude(i, i)) > std::abs(cut.amplitude(arg, arg))) arg = i;
  if (cut.amplitude(arg, arg) < 0.0) cut.amplitude = -cut.amplitude;
  cut.density = cut.amplitude.cwiseAbs2();
  cut.diagonal.resize(static_cast<std::size_t>(g));
  cut.antidiagonal.resize(static_cast<std::size_t>(g));
  cut.diagonal_amplitude.resize(static_cast<std::size_t>(g));
  cut.antidiagonal_amplitude.resize(static_cast<std::size_t>(g));
  for (Eigen::Index i = 0; i < g; ++i) {
    cut.diagonal_amplitude[i] = cut.amplitude(i, i);
    cut.antidiagonal_amplitude[i] = cut.amplitude(i, g - 1 - i);
    cut.diagonal[i] = cut.density(i, i);
    cut.antidiagonal[i] = cut.density(i, g - 1 - i);
  }
}

DensityCut evaluate_density_cut(const CiSolution& sol, std::span<const Eigen::Index> states, const BasisSet& basis,
                                const ConfigurationSpace& space, const AxisGrid& grid) {
  if (states.empty()) throw InvalidParameter("density cut needs at least one state");
  for (auto s : states) {
    if (s < 0 || s >= sol.coefficients.cols()) {
      std::ostringstream msg;
      msg << "state index " << s << " outside the solved spectrum (" << sol.coefficients.cols() << " states)";
      throw InvalidParameter(msg.str());
    }
  }
  DensityCut cut;
  cut.z = grid.values();
  const auto g = static_cast<Eigen::Index>(cut.z.size());
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd f(g, n);
  for (Eigen::Index i = 0; i < g; ++i)
    for (Eigen::Index k = 0; k < n; ++k) f(i, k) = basis[static_cast<std::size_t>(k)].value({0.0, 0.0, cut.z[i]});

  std::vector<Eigen::MatrixXd> psi;
  for (auto s : states) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t j = 0; j < space.size(); ++j) {
      const auto [a, b] = space.pairs[j];
      const double c = sol.coefficients(static_cast<Eigen::Index>(j), s);
      m(a, b) += c;
      m(b, a) += c;
    }
    psi.push_back(f * m * f.transpose());
  }
  const auto k = static_cast<Eigen::Index>(psi.size());
  Eigen::MatrixXd gram(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) gram(i, j) = psi[i].cwiseProduct(psi[j]).sum();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  const Eigen::VectorXd w = es.eigenvectors().col(k - 1);
  cut.amplitude = Eigen::MatrixXd::Zero(g, g);
  for (Eigen::Index i = 0; i < k; ++i) cut.amplitude += w(i) * psi[i];
  finish_density_cut(cut);
  return cut;
}

double density_overlap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InvalidParameter("density grids differ in shape");
  return a.cwiseProduct(b).sum() / (a.norm() * b.norm());
}

int count_nodes(std::span<const double> amplitude, double rel_floor) {
  double peak = 0.0;
  for (double v : amplitude) peak = std::max(peak, std::abs(v));
  int nodes = 0;
  int last = 0;
  for (double v : amplitude) {
    if (std::abs(v) <= rel_floor * peak) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++nodes;
    last = s;
  }
  return nodes;
}

}  // namespace gtoci
