#pragma once

// Degenerate perturbation theory around the spectrum of the watching
// operator: eigenlevel grouping, eigenprojectors, the reduced resolvent of
// the zero level and the order-0 / order-1 effective Zeno Hamiltonians.

#include <optional>
#include <vector>

#include "zeno/linalg.hpp"

namespace zeno {

struct DegenerateLevel {
  double eigenvalue = 0.0;           ///< mean of the clustered eigenvalues
  std::vector<Index> member_indices;  ///< columns of the source decomposition
  DenseMatrix basis;      ///< N x multiplicity, the member eigenvectors
  DenseMatrix projector;  ///< basis * basis^T

  Index multiplicity() const noexcept { return static_cast<Index>(member_indices.size()); }
};

struct ProjectorSet {
  std::vector<DegenerateLevel> levels;  ///< ascending eigenvalue
  double grouping_tolerance = 0.0;
  std::optional<std::size_t> zero_level_index;

  bool has_zero_level() const noexcept { return zero_level_index.has_value(); }
  /// Throws PreconditionError when there is no zero level.
  const DegenerateLevel& zero_level() const;
  /// Projector onto the zero level, or the zero matrix when there is none.
  DenseMatrix zero_projector() const;
  Index dimension() const;
};

/// 1e-8 * max|eta|, or 1e-8 for the zero matrix.
double default_grouping_tolerance(const SpectralDecompositiond& d);

/// Clusters eigenvalues whose neighbouring gaps are <= tol. A gap in
/// (tol, 10 tol], or a cluster wider than tol, makes the grouping ambiguous
/// and raises AmbiguousClusteringError listing the gap spectrum.
ProjectorSet group_levels(const SpectralDecompositiond& d, double tol);

struct EffectiveHamiltonian {
  int order = 0;
  DenseMatrix matrix;                ///< full N x N site basis
  std::optional<double> eta1_common;  ///< c when the order-0 matrix equals c * P0
};

/// P0 H P0. `proportionality_tol` is relative to ||H||_F.
EffectiveHamiltonian hqzd_order0(const DenseMatrix& p0, const DenseMatrix& h_weak,
                                 double proportionality_tol = 1e-10);

/// Sum over nonzero levels of P_n / (-eta_n).
DenseMatrix reduced_resolvent(const ProjectorSet& ps);

/// lambda * P0 H Qtilde H P0.
EffectiveHamiltonian hqzd_order1(const DenseMatrix& p0, const DenseMatrix& h_weak,
                                 const DenseMatrix& qtilde, double lambda);

/// Basis of the zero level that diagonalizes P0 H Qtilde H P0, with the
/// corresponding second-order shifts. `tie` is set when two shifts coincide
/// within 1e-10 (the basis is then not unique).
struct ZeroLevelBasis {
  DenseMatrix vectors;          ///< N x dim(P0), orthonormal columns
  Eigen::VectorXd second_order;  ///< eigenvalues of P0 H Qtilde H P0 on the level
  bool tie = false;
};
ZeroLevelBasis zero_level_basis(const ProjectorSet& ps, const DenseMatrix& h_weak,
                                const DenseMatrix& qtilde);

/// First-order eigenvector corrections of the watching operator under h_weak,
/// in a basis where the zero level is spanned by `zero_basis`.
struct FirstOrderCorrections {
  DenseMatrix unperturbed;           ///< columns |phi^(0)_c>
  DenseMatrix corrections;           ///< columns |phi^(1)_c>
  Eigen::VectorXd eta0;              ///< unperturbed eigenvalue of column c
  Eigen::VectorXd eta1;              ///< <phi^(0)_c| H |phi^(0)_c>
  Eigen::VectorXd eta2;              ///< second-order shift (zero-level columns only, else 0)
  std::vector<Index> level_of;       ///< level index of column c
  std::vector<Index> zero_columns;   ///< columns spanning the zero level

  /// eta0 + lambda eta1 + lambda^2 eta2, the eigenvalue estimate of (H_w + lambda H).
  Eigen::VectorXd perturbed_eigenvalues(double lambda) const;
};

/// Requires a zero level of multiplicity exactly 2 (UnsupportedConfiguration
/// otherwise) and an orthonormal N x 2 `zero_basis` inside it.
FirstOrderCorrections first_order_corrections(const SpectralDecompositiond& d,
                                              const ProjectorSet& ps,
                                              const DenseMatrix& h_weak,
                                              const DenseMatrix& zero_basis);

}  // namespace zeno
