#include "zeno/perturbation.hpp"

#include <sstream>

namespace zeno {

const DegenerateLevel& ProjectorSet::zero_level() const {
  if (!zero_level_index) throw PreconditionError("projector set has no zero level");
  return levels[*zero_level_index];
}

DenseMatrix ProjectorSet::zero_projector() const {
  if (!zero_level_index) {
    const Index n = dimension();
    return DenseMatrix::Zero(n, n);
  }
  return levels[*zero_level_index].projector;
}

Index ProjectorSet::dimension() const {
  return levels.empty() ? 0 : levels.front().projector.rows();
}

double default_grouping_tolerance(const SpectralDecompositiond& d) {
  const double m = d.eigenvalues.size() > 0 ? d.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  return m > 0.0 ? 1e-8 * m : 1e-8;
}

namespace {

[[noreturn]] void throw_ambiguous(const Eigen::VectorXd& eta, double tol) {
  std::ostringstream os;
  os.precision(6);
  os << "group_levels: ambiguous clustering at tolerance " << tol << "; gaps:";
  for (Index i = 0; i + 1 < eta.size(); ++i) os << ' ' << (eta(i + 1) - eta(i));
  throw AmbiguousClusteringError(os.str());
}

}  // namespace

ProjectorSet group_levels(const SpectralDecompositiond& d, double tol) {
  if (!(tol > 0.0)) throw PreconditionError("group_levels: tolerance must be positive");
  const Eigen::VectorXd& eta = d.eigenvalues;
  const Index n = eta.size();

  std::vector<std::vector<Index>> clusters;
  clusters.push_back({0});
  for (Index i = 1; i < n; ++i) {
    const double gap = eta(i) - eta(i - 1);
    if (gap <= tol) {
      clusters.back().push_back(i);
    } else if (gap <= 10.0 * tol) {
      throw_ambiguous(eta, tol);
    } else {
      clusters.push_back({i});
    }
  }

  ProjectorSet ps;
  ps.grouping_tolerance = tol;
  for (const auto& members : clusters) {
    if (eta(members.back()) - eta(members.front()) > tol) throw_ambiguous(eta, tol);
    DegenerateLevel level;
    level.member_indices = members;
    level.basis.resize(n, static_cast<Index>(members.size()));
    double sum = 0.0;
    for (std::size_t j = 0; j < members.size(); ++j) {
      level.basis.col(static_cast<Index>(j)) = d.eigenvectors.col(members[j]);
      sum += eta(members[j]);
    }
    level.eigenvalue = sum / static_cast<double>(members.size());
    level.projector = level.basis * level.basis.transpose();
    if (std::abs(level.eigenvalue) < tol) ps.zero_level_index = ps.levels.size();
    ps.levels.push_back(std::move(level));
  }
  return ps;
}

EffectiveHamiltonian hqzd_order0(const DenseMatrix& p0, const DenseMatrix& h_weak,
                                 double proportionality_tol) {
  if (p0.rows() != h_weak.rows() || p0.cols() != h_weak.cols())
    throw PreconditionError("hqzd_order0: dimension mismatch");
  DenseMatrix m = p0 * h_weak * p0;
  m = 0.5 * (m + m.transpose()).eval();

  EffectiveHamiltonian out{0, m, std::nullopt};
  const double rank = p0.trace();
  if (rank > 0.5) {
    const double c = m.trace() / rank;
    const double scale = std::max(h_weak.norm(), std::numeric_limits<double>::min());
    if ((m - c * p0).norm() <= proportionality_tol * scale) out.eta1_common = c;
  }
  return out;
}

DenseMatrix reduced_resolvent(const ProjectorSet& ps) {
  if (!ps.has_zero_level()) throw PreconditionError("reduced_resolvent: no zero level");
  const Index n = ps.dimension();
  DenseMatrix q = DenseMatrix::Zero(n, n);
  for (std::size_t i = 0; i < ps.levels.size(); ++i) {
    if (i == *ps.zero_level_index) continue;
    q -= ps.levels[i].projector / ps.levels[i].eigenvalue;
  }
  return 0.5 * (q + q.transpose());
}

EffectiveHamiltonian hqzd_order1(const DenseMatrix& p0, const DenseMatrix& h_weak,
                                 const DenseMatrix& qtilde, double lambda) {
  if (p0.rows() != h_weak.rows() || qtilde.rows() != h_weak.rows())
    throw PreconditionError("hqzd_order1: dimension mismatch");
  DenseMatrix m = lambda * (p0 * h_weak * qtilde * h_weak * p0);
  return EffectiveHamiltonian{1, 0.5 * (m + m.transpose()), std::nullopt};
}

ZeroLevelBasis zero_level_basis(const ProjectorSet& ps, const DenseMatrix& h_weak,
                                const DenseMatrix& qtilde) {
  const DenseMatrix& b = ps.zero_level().basis;
  DenseMatrix reduced = b.transpose() * h_weak * qtilde * h_weak * b;
  reduced = 0.5 * (reduced + reduced.transpose()).eval();
  const SpectralDecompositiond inner = eig_sym_dense<double>(reduced);

  ZeroLevelBasis out;
  out.vectors = b * inner.eigenvectors;
  for (Index j = 0; j < out.vectors.cols(); ++j) detail::fix_phase<double>(out.vectors.col(j));
  out.second_order = inner.eigenvalues;
  const double scale = std::max(1.0, inner.eigenvalues.cwiseAbs().maxCoeff());
  for (Index j = 1; j < inner.eigenvalues.size(); ++j)
    if (inner.eigenvalues(j) - inner.eigenvalues(j - 1) < 1e-10 * scale) out.tie = true;
  return out;
}

Eigen::VectorXd FirstOrderCorrections::perturbed_eigenvalues(double lambda) const {
  return eta0 + lambda * eta1 + lambda * lambda * eta2;
}

FirstOrderCorrections first_order_corrections(const SpectralDecompositiond& d,
                                              const ProjectorSet& ps,
                                              const DenseMatrix& h_weak,
                                              const DenseMatrix& zero_basis) {
  const Index n = d.size();
  if (!ps.has_zero_level() || ps.zero_level().multiplicity() != 2)
    throw UnsupportedConfiguration(
        "first_order_corrections: zero level must be exactly twofold degenerate");
  const DegenerateLevel& zero = ps.zero_level();
  if (zero_basis.rows() != n || zero_basis.cols() != 2)
    throw PreconditionError("first_order_corrections: zero basis must be N x 2");
  if ((zero_basis.transpose() * zero_basis - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() >
          1e-10 ||
      (zero.projector * zero_basis - zero_basis).cwiseAbs().maxCoeff() > 1e-10)
    throw PreconditionError("first_order_corrections: zero basis not orthonormal inside the zero level");

  FirstOrderCorrections fc;
  fc.unperturbed = d.eigenvectors;
  fc.eta0 = d.eigenvalues;
  fc.level_of.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t l = 0; l < ps.levels.size(); ++l)
    for (Index m : ps.levels[l].member_indices) fc.level_of[static_cast<std::size_t>(m)] = static_cast<Index>(l);

  for (std::size_t j = 0; j < zero.member_indices.size(); ++j) {
    const Index c = zero.member_indices[j];
    fc.unperturbed.col(c) = zero_basis.col(static_cast<Index>(j));
    fc.eta0(c) = 0.0;
    fc.zero_columns.push_back(c);
  }

  const DenseMatrix hm = fc.unperturbed.transpose() * h_weak * fc.unperturbed;
  fc.corrections = DenseMatrix::Zero(n, n);
  fc.eta1 = hm.diagonal();
  fc.eta2 = Eigen::VectorXd::Zero(n);
  for (Index c = 0; c < n; ++c) {
    const Index lc = fc.level_of[static_cast<std::size_t>(c)];
    for (Index i = 0; i < n; ++i) {
      const Index li = fc.level_of[static_cast<std::size_t>(i)];
      if (li == lc) continue;
      const double denom = fc.eta0(c) - fc.eta0(i);
      fc.corrections.col(c) += fc.unperturbed.col(i) * (hm(i, c) / denom);
      fc.eta2(c) += hm(i, c) * hm(i, c) / denom;
    }
  }
  return fc;
}

}  // namespace zeno
