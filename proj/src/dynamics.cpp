#include "zeno/dynamics.hpp"

#include <unsupported/Eigen/FFT>

#include <numbers>

namespace zeno {

TimeGrid::TimeGrid(double t_max, int n_steps) : t_max_(t_max), n_steps_(n_steps) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("t_max", "must be positive");
  if (n_steps < 1) throw ValidationError("steps", "must be at least 1");
}

EvolutionTrace simulate(const SpectralDecompositiond& d, const State& psi0, const TimeGrid& grid,
                        const DenseMatrix& p0, const std::optional<Eigen::VectorXd>& mid) {
  const Index n = d.size();
  if (p0.rows() != n || p0.cols() != n) throw PreconditionError("simulate: projector dimension mismatch");
  if (mid && mid->size() != n) throw PreconditionError("simulate: mid vector dimension mismatch");
  const SpectralPropagator<double> propagator(d, psi0);
  const Eigen::MatrixXcd p0c = p0.cast<std::complex<double>>();

  EvolutionTrace trace{grid, Eigen::MatrixXd(grid.size(), n), Eigen::VectorXd(grid.size()),
                       Eigen::VectorXd(grid.size()), std::nullopt};
  if (mid) trace.mid_overlap = Eigen::VectorXd(grid.size());
  for (Index s = 0; s < grid.size(); ++s) {
    const State psi = propagator.at(grid[s]);
    trace.populations.row(s) = psi.cwiseAbs2().transpose();
    const double inside = (p0c * psi).squaredNorm();
    trace.subspace_population(s) = inside;
    trace.leakage(s) = std::max(0.0, 1.0 - inside);
    if (mid) (*trace.mid_overlap)(s) = std::norm(mid->cast<std::complex<double>>().dot(psi));
  }
  return trace;
}

EvolutionTrace simulate(const SymTridiagd& h, const State& psi0, const TimeGrid& grid,
                        const DenseMatrix& p0, const std::optional<Eigen::VectorXd>& mid) {
  return simulate(eig_sym_tridiag(h), psi0, grid, p0, mid);
}

EvolutionTrace simulate(const DenseMatrix& h, const State& psi0, const TimeGrid& grid,
                        const DenseMatrix& p0, const std::optional<Eigen::VectorXd>& mid) {
  return simulate(eig_sym_dense<double>(h), psi0, grid, p0, mid);
}

LeakageReport measure_leakage(const EvolutionTrace& trace) {
  Index best = 0;
  for (Index s = 1; s < trace.leakage.size(); ++s)
    if (trace.leakage(s) > trace.leakage(best)) best = s;
  return LeakageReport{std::clamp(trace.leakage(best), 0.0, 1.0), trace.grid[best],
                       trace.grid.t_max(), trace.grid.n_steps()};
}

Eigen::VectorXd u1_correction_trace(const FirstOrderCorrections& fc, double lambda,
                                    const State& psi0, const TimeGrid& tau_grid) {
  const Index n = fc.unperturbed.rows();
  if (psi0.size() != n) throw PreconditionError("u1_correction_trace: dimension mismatch");
  const Eigen::VectorXd eta = fc.perturbed_eigenvalues(lambda);
  const Eigen::MatrixXcd u0 = fc.unperturbed.cast<std::complex<double>>();
  const Eigen::MatrixXcd u1 = fc.corrections.cast<std::complex<double>>();
  const Eigen::VectorXcd a0 = u0.adjoint() * psi0;  // <phi0_c|psi0>
  const Eigen::VectorXcd a1 = u1.adjoint() * psi0;  // <phi1_c|psi0>

  Eigen::VectorXd out(tau_grid.size());
  const std::complex<double> minus_i(0, -1);
  for (Index s = 0; s < tau_grid.size(); ++s) {
    Eigen::VectorXcd phase(n);
    for (Index c = 0; c < n; ++c) phase(c) = std::exp(minus_i * eta(c) * tau_grid[s]);
    const Eigen::VectorXcd v =
        lambda * (u1 * phase.cwiseProduct(a0) + u0 * phase.cwiseProduct(a1));
    out(s) = v.squaredNorm();
  }
  return out;
}

double leakage_frequency_estimate(const SpectralDecompositiond& h_total, const SymTridiagd& h_weak,
                                  int n_sites) {
  if (n_sites < 4 || n_sites % 2 != 0)
    throw UnsupportedConfiguration("leakage_frequency_estimate: needs an even chain");
  if (h_total.size() != n_sites || h_weak.size() != n_sites)
    throw PreconditionError("leakage_frequency_estimate: dimension mismatch");
  // Sorted spectrum: N/2-1 negative bulk levels, two near-zero levels, N/2-1
  // positive bulk levels.
  const Index half = n_sites / 2;
  const Index bulk = half + 1;
  const Eigen::VectorXd vb = h_total.eigenvectors.col(bulk);
  Index partner = half - 1;
  double best = -1.0;
  for (Index z : {half - 1, half}) {
    const double coupling = std::abs(h_total.eigenvectors.col(z).dot(h_weak * vb));
    if (coupling > best) {
      best = coupling;
      partner = z;
    }
  }
  return h_total.eigenvalues(bulk) - h_total.eigenvalues(partner);
}

std::optional<double> dominant_frequency(const Eigen::VectorXd& series, double dt,
                                         double min_cycles) {
  const Index n = series.size();
  if (n < 4) return std::nullopt;
  std::vector<double> centered(static_cast<std::size_t>(n));
  const double mean = series.mean();
  for (Index i = 0; i < n; ++i) centered[static_cast<std::size_t>(i)] = series(i) - mean;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, centered);
  std::size_t best = 1;
  for (std::size_t b = 2; b <= static_cast<std::size_t>(n) / 2; ++b)
    if (std::abs(spectrum[b]) > std::abs(spectrum[best])) best = b;
  const double window = dt * static_cast<double>(n);
  const double cycles = static_cast<double>(best);
  if (cycles < min_cycles) return std::nullopt;
  return 2.0 * std::numbers::pi * cycles / window;
}

double default_window(const ChainSpec& spec) {
  const double pi = std::numbers::pi;
  if (spec.n_sites % 2 == 0) return pi / (spec.lambda() * spec.k);
  if (spec.is_modified()) return pi * std::abs(*spec.delta_omega) / (spec.k * spec.k);
  const double c = spec.k / std::sqrt((spec.n_sites - 1) / 2.0);
  return std::sqrt(2.0) * pi / c;
}

}  // namespace zeno
