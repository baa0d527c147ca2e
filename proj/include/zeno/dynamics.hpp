#pragma once

#include <optional>
#include <vector>

#include "zeno/chain.hpp"
#include "zeno/linalg.hpp"
#include "zeno/perturbation.hpp"

namespace zeno {

/// Uniform grid t_i = i * t_max / n_steps, i = 0..n_steps.
class TimeGrid {
 public:
  TimeGrid(double t_max, int n_steps);

  double t_max() const noexcept { return t_max_; }
  int n_steps() const noexcept { return n_steps_; }
  Index size() const noexcept { return n_steps_ + 1; }
  double dt() const noexcept { return t_max_ / n_steps_; }
  double operator[](Index i) const noexcept {
    return i == n_steps_ ? t_max_ : static_cast<double>(i) * dt();
  }

 private:
  double t_max_;
  int n_steps_;
};

struct EvolutionTrace {
  TimeGrid grid;
  Eigen::MatrixXd populations;          ///< grid.size() x N, |<i|psi(t)>|^2
  Eigen::VectorXd subspace_population;  ///< |P0 psi(t)|^2
  Eigen::VectorXd leakage;              ///< 1 - |P0 psi(t)|^2
  std::optional<Eigen::VectorXd> mid_overlap;
};

struct LeakageReport {
  double delta = 0.0;
  double attained_at = 0.0;
  double t_max = 0.0;
  int n_steps = 0;
};

/// Exact spectral propagation of psi0 under the matrix whose decomposition is
/// `d`, recording populations and the weight outside the subspace `p0`.
/// When `mid` is given its overlap |<mid|psi(t)>|^2 is recorded too.
EvolutionTrace simulate(const SpectralDecompositiond& d, const State& psi0, const TimeGrid& grid,
                        const DenseMatrix& p0, const std::optional<Eigen::VectorXd>& mid = {});
EvolutionTrace simulate(const SymTridiagd& h, const State& psi0, const TimeGrid& grid,
                        const DenseMatrix& p0, const std::optional<Eigen::VectorXd>& mid = {});
EvolutionTrace simulate(const DenseMatrix& h, const State& psi0, const TimeGrid& grid,
                        const DenseMatrix& p0, const std::optional<Eigen::VectorXd>& mid = {});

/// Largest leakage over the grid and the first time it is attained.
LeakageReport measure_leakage(const EvolutionTrace& trace);

/// |U1(tau) psi0|^2 on a grid of rescaled times tau = t / lambda, where
///   U1(tau) = lambda sum_c exp(-i eta_c tau) (|phi1_c><phi0_c| + |phi0_c><phi1_c|)
/// and eta_c are the perturbative eigenvalues of (H_w + lambda H).
Eigen::VectorXd u1_correction_trace(const FirstOrderCorrections& fc, double lambda,
                                    const State& psi0, const TimeGrid& tau_grid);

/// Angular frequency of the dominant leakage oscillation of an even chain,
/// E_bulk - E_partner from the exact eigenvalues of H_tot: E_bulk is the
/// lowest positive bulk level (the n = (N-2)/2 mode) and E_partner the
/// near-zero level it couples to through the weak bonds.
double leakage_frequency_estimate(const SpectralDecompositiond& h_total, const SymTridiagd& h_weak,
                                  int n_sites);

/// Angular frequency of the largest nonzero-frequency bin of the
/// mean-subtracted series. Returns nullopt when the window holds fewer than
/// `min_cycles` cycles of that frequency.
std::optional<double> dominant_frequency(const Eigen::VectorXd& series, double dt,
                                         double min_cycles = 5.0);

/// Default observation window: one end-to-end cycle of the effective dynamics.
///   even chain:          pi / (lambda k)
///   shifted odd chain:   pi |dw| / k^2
///   unshifted odd chain: sqrt(2) pi / (k / sqrt((N-1)/2))
double default_window(const ChainSpec& spec);

}  // namespace zeno
