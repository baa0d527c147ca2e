#pragma once

// Closed-form results for tight-binding chains with weak end bonds. Sites are
// 1-based in the documentation and 0-based in returned vectors/matrices.

#include <utility>

#include "zeno/linalg.hpp"

namespace zeno::analytic {

/// Fitted proportionality constant of the mean leakage law delta ~ 4.3 G^2
/// (least-squares fit of mean leakage against G^2, valid for delta < 0.2).
inline constexpr double kLeakageFitConstant = 4.3;
/// Upper end of the leakage range in which the fit holds.
inline constexpr double kLeakageFitValidity = 0.2;

/// n-th nonzero-level eigenpair of the watching operator of an N-site chain:
/// eta_n = 2k cos(n pi/(N-1)), components sqrt(2/(N-1)) sin(n(i-1)pi/(N-1))
/// on sites i = 2..N-1 and zero on the end sites. 1 <= n <= N-2.
std::pair<double, Eigen::VectorXd> toeplitz_eigenpair(int n_sites, double k, int n);

/// (-1)^{N/2-1} lambda k (|1><N| + |N><1|) for even N >= 4.
DenseMatrix hqzd1_even(int n_sites, double k, double lambda);

/// Zero mode of the interior block of an odd chain:
/// (|2> - |4> + ... ) / sqrt((N-1)/2).
Eigen::VectorXd phi_mid(int n_sites);

/// Order-0 effective Hamiltonian of an unmodified odd chain. The end sites
/// couple to phi_mid with <1|H|phi_mid> = k/sqrt((N-1)/2) and
/// <phi_mid|H|N> = (-1)^{(N+1)/2} k/sqrt((N-1)/2), the sign fixed by phi_mid's
/// last component.
DenseMatrix hqzd0_odd(int n_sites, double k);

/// Order-1 effective Hamiltonian of an odd chain with an on-site shift
/// delta_omega on site 2:
/// (-1)^{(N-1)/2} (k^2/dw)(|1><N| + h.c.) - (k^2/dw)(|1><1| + |N><N|).
DenseMatrix hqzd1_odd_modified(int n_sites, double k, double delta_omega);

/// tan(pi/2 (N-2)/(N-1)) / sqrt(N-1), even N >= 4.
double f_of_N(int n_sites);
/// lambda tan(n pi/(N-1)) / sqrt(N-1), even N, 1 <= n <= N-2.
double g_n(int n_sites, double lambda, int n);
/// lambda f(N) = max_n |g_n|.
double big_G(int n_sites, double lambda);

/// 4.3 lambda^2 f(N)^2.
double delta_estimate(int n_sites, double lambda);
/// Smallest strength ratio f(N) sqrt(4.3/delta0) with predicted leakage below
/// delta0. delta0 must lie in (0, 0.2).
double lambda_bound(int n_sites, double delta0);

/// <2|Qtilde|N-1> of an even chain with interior couplings k_2..k_{N-2}:
/// (-1)^{N/2-1} prod_{odd i} k_i / prod_{even i} k_i.
double qtilde_fluctuating_corner(const Eigen::VectorXd& couplings);

}  // namespace zeno::analytic
