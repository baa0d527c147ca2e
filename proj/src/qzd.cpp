#include "zeno/qzd.hpp"

#include "zeno/dynamics.hpp"
#include "zeno/perturbation.hpp"

namespace zeno {

std::string_view to_string(QzdOrder order) noexcept {
  switch (order) {
    case QzdOrder::no_dynamics: return "no_dynamics";
    case QzdOrder::zeroth: return "zeroth";
    case QzdOrder::first: return "first";
    case QzdOrder::higher_or_none: return "higher_or_none";
  }
  return "unknown";
}

namespace {

double commutator_norm(const DenseMatrix& h, const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd hc = h.cast<std::complex<double>>();
  return (hc * rho - rho * hc).norm();
}

}  // namespace

QzdClassification classify(const SymTridiagd& h_watch, const SymTridiagd& h_weak, double lambda,
                           const State& psi0, double tol) {
  const Index n = h_watch.size();
  if (h_weak.size() != n || psi0.size() != n) throw PreconditionError("classify: dimension mismatch");
  if (std::abs(psi0.norm() - 1.0) > 1e-12) throw PreconditionError("classify: psi0 not normalized");

  const double watch_scale = std::max(h_watch.max_abs_entry(), std::numeric_limits<double>::min());
  if ((h_watch * psi0).norm() > tol * watch_scale)
    throw AssumptionViolation("classify: the watching Hamiltonian does not annihilate psi0");

  QzdClassification out;
  out.watch_annihilates_initial = true;

  const SpectralDecompositiond d = eig_sym_tridiag(h_watch);
  const ProjectorSet ps = group_levels(d, default_grouping_tolerance(d));
  const DenseMatrix p0 = ps.zero_projector();
  out.zero_level_dimension = ps.has_zero_level() ? static_cast<int>(ps.zero_level().multiplicity()) : 0;

  if (out.zero_level_dimension < 2) {
    out.order = QzdOrder::no_dynamics;
    out.notes = "zero level is one-dimensional; no room for constrained dynamics";
    return out;
  }

  const DenseMatrix h = h_weak.to_dense();
  const Eigen::MatrixXcd rho = psi0 * psi0.adjoint();
  const double h_norm = h.norm();

  const EffectiveHamiltonian h0 = hqzd_order0(p0, h, tol);
  out.commutator_order0 = commutator_norm(h0.matrix, rho);
  if (out.commutator_order0 > tol * h_norm) {
    out.order = QzdOrder::zeroth;
    out.notes = "P0 H P0 does not commute with the initial state";
    return out;
  }
  if (!h0.eta1_common) {
    out.order = QzdOrder::no_dynamics;
    out.notes = "initial state is an eigenstate of a non-degenerate P0 H P0";
    return out;
  }

  const DenseMatrix q = reduced_resolvent(ps);
  const EffectiveHamiltonian h1 = hqzd_order1(p0, h, q, lambda);
  out.commutator_order1 = commutator_norm(h1.matrix, rho);
  // Structural scale of lambda P0 H Q H P0: lambda ||H||^2 max|Q|.
  const double q_scale = ps.levels.size() > 1 ? q.cwiseAbs().maxCoeff() : 0.0;
  const double h1_scale = lambda * h_norm * h_norm * std::max(q_scale, 1e-300);
  out.prerequisite_I = out.commutator_order1 > tol * h1_scale;
  if (out.prerequisite_I) {
    out.order = QzdOrder::first;
    out.notes = "P0 H P0 is proportional to P0; lambda P0 H Q H P0 drives the dynamics";
  } else {
    out.order = QzdOrder::higher_or_none;
    out.notes = "order-0 and order-1 terms both commute with the initial state";
  }
  return out;
}

PrerequisiteIIResult check_prerequisite_ii(const LeakageReport& report, double delta0) {
  if (!(delta0 > 0.0 && delta0 < 1.0))
    throw PreconditionError("check_prerequisite_ii: delta0 must lie in (0, 1)");
  return PrerequisiteIIResult{report.delta, delta0, report.delta < delta0, report.attained_at};
}

}  // namespace zeno
