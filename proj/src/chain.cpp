#include "zeno/chain.hpp"

#include <random>

namespace zeno {

void ChainSpec::validate() const {
  if (n_sites < 4) throw ValidationError("n_sites", "chains need at least 4 sites");
  if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("k", "coupling must be positive");
  if (!(lambda_inv >= 1.0) || !std::isfinite(lambda_inv))
    throw ValidationError("lambda_inv", "strength ratio must be >= 1");
  if (delta_omega) {
    if (!std::isfinite(*delta_omega)) throw ValidationError("delta_omega", "must be finite");
    if (shift_site % 2 != 0 || shift_site < 2 || shift_site > n_sites - 1)
      throw ValidationError("shift_site", "must be an even site in [2, N-1]");
  }
  if (fluctuation) {
    const double a = fluctuation->relative_amplitude;
    if (!(a >= 0.0 && a <= 0.2))
      throw ValidationError("fluctuation.relative_amplitude", "must lie in [0, 0.2]");
  }
}

ChainHamiltonians build_chain(const ChainSpec& spec) {
  spec.validate();
  const Index n = spec.n_sites;

  Eigen::VectorXd strong = Eigen::VectorXd::Zero(n - 1);
  for (Index b = 1; b <= n - 3; ++b) strong(b) = spec.k;
  if (spec.fluctuation && spec.fluctuation->relative_amplitude > 0.0) {
    const double a = spec.fluctuation->relative_amplitude;
    std::mt19937_64 rng(spec.fluctuation->rng_seed);
    std::uniform_real_distribution<double> u(-a, a);
    for (Index b = 1; b <= n - 3; ++b) strong(b) = spec.k * (1.0 + u(rng));
  }

  Eigen::VectorXd weak = Eigen::VectorXd::Zero(n - 1);
  weak(0) = spec.k;
  weak(n - 2) = spec.k;

  Eigen::VectorXd onsite = Eigen::VectorXd::Zero(n);
  if (spec.delta_omega) onsite(spec.shift_site - 1) = *spec.delta_omega;

  SymTridiagd watch(Eigen::VectorXd::Zero(n), strong);
  SymTridiagd weak_h(Eigen::VectorXd::Zero(n), weak);
  SymTridiagd total(onsite, spec.lambda_inv * strong + weak);
  return ChainHamiltonians{std::move(total), std::move(watch), std::move(weak_h), std::move(onsite),
                           spec.lambda_inv};
}

SymTridiagd ChainHamiltonians::watch_with_shift() const {
  SymTridiagd w = h_watch;
  for (Index i = 0; i < w.size(); ++i) w.diag(i) += onsite(i) / lambda_inv;
  return w;
}

SymTridiagd interior_block(const SymTridiagd& watch) {
  if (watch.size() < 4) throw PreconditionError("interior_block: need at least 4 sites");
  return watch.block(1, watch.size() - 2);
}

Eigen::VectorXd interior_couplings(const ChainHamiltonians& chain) {
  const Index n = chain.size();
  return chain.h_watch.offdiag().segment(1, n - 3);
}

}  // namespace zeno
