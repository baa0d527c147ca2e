#include "zeno/analytic.hpp"

#include <cmath>
#include <numbers>

namespace zeno::analytic {

namespace {

void require_even(int n_sites, const char* where) {
  if (n_sites < 4 || n_sites % 2 != 0)
    throw PreconditionError(std::string(where) + ": needs an even chain with N >= 4");
}

void require_odd(int n_sites, const char* where) {
  if (n_sites < 5 || n_sites % 2 == 0)
    throw PreconditionError(std::string(where) + ": needs an odd chain with N >= 5");
}

double parity(int p) { return p % 2 == 0 ? 1.0 : -1.0; }

}  // namespace

std::pair<double, Eigen::VectorXd> toeplitz_eigenpair(int n_sites, double k, int n) {
  if (n_sites < 4) throw PreconditionError("toeplitz_eigenpair: N must be >= 4");
  if (n < 1 || n > n_sites - 2) throw PreconditionError("toeplitz_eigenpair: n out of range");
  const double pi = std::numbers::pi;
  const double m = n_sites - 1;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n_sites);
  const double norm = std::sqrt(2.0 / m);
  for (int i = 2; i <= n_sites - 1; ++i) v(i - 1) = norm * std::sin(n * (i - 1) * pi / m);
  return {2.0 * k * std::cos(n * pi / m), v};
}

DenseMatrix hqzd1_even(int n_sites, double k, double lambda) {
  require_even(n_sites, "hqzd1_even");
  DenseMatrix h = DenseMatrix::Zero(n_sites, n_sites);
  const double v = parity(n_sites / 2 - 1) * lambda * k;
  h(0, n_sites - 1) = h(n_sites - 1, 0) = v;
  return h;
}

Eigen::VectorXd phi_mid(int n_sites) {
  require_odd(n_sites, "phi_mid");
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n_sites);
  const double norm = 1.0 / std::sqrt((n_sites - 1) / 2.0);
  // site 2j carries (-1)^{j+1}
  for (int j = 1; 2 * j <= n_sites - 1; ++j) v(2 * j - 1) = parity(j + 1) * norm;
  return v;
}

DenseMatrix hqzd0_odd(int n_sites, double k) {
  require_odd(n_sites, "hqzd0_odd");
  const Eigen::VectorXd mid = phi_mid(n_sites);
  const double c = k / std::sqrt((n_sites - 1) / 2.0);
  const Index last = n_sites - 1;
  Eigen::VectorXd e1 = Eigen::VectorXd::Unit(n_sites, 0);
  Eigen::VectorXd en = Eigen::VectorXd::Unit(n_sites, last);
  const double right = parity((n_sites + 1) / 2) * c;
  DenseMatrix h = c * (e1 * mid.transpose()) + right * (mid * en.transpose());
  return h + h.transpose();
}

DenseMatrix hqzd1_odd_modified(int n_sites, double k, double delta_omega) {
  require_odd(n_sites, "hqzd1_odd_modified");
  if (delta_omega == 0.0) throw PreconditionError("hqzd1_odd_modified: delta_omega must be nonzero");
  const double c = k * k / delta_omega;
  const Index last = n_sites - 1;
  DenseMatrix h = DenseMatrix::Zero(n_sites, n_sites);
  h(0, last) = h(last, 0) = parity((n_sites - 1) / 2) * c;
  h(0, 0) = h(last, last) = -c;
  return h;
}

double f_of_N(int n_sites) {
  require_even(n_sites, "f_of_N");
  const double m = n_sites - 1;
  return std::tan(std::numbers::pi / 2.0 * (n_sites - 2) / m) / std::sqrt(m);
}

double g_n(int n_sites, double lambda, int n) {
  require_even(n_sites, "g_n");
  if (n < 1 || n > n_sites - 2) throw PreconditionError("g_n: n out of range");
  const double m = n_sites - 1;
  return lambda / std::sqrt(m) * std::tan(n * std::numbers::pi / m);
}

double big_G(int n_sites, double lambda) { return lambda * f_of_N(n_sites); }

double delta_estimate(int n_sites, double lambda) {
  const double g = big_G(n_sites, lambda);
  return kLeakageFitConstant * g * g;
}

double lambda_bound(int n_sites, double delta0) {
  if (!(delta0 > 0.0)) throw PreconditionError("lambda_bound: delta0 must be positive");
  if (delta0 >= kLeakageFitValidity)
    throw PreconditionError("lambda_bound: delta0 outside the fit validity range (< 0.2)");
  return f_of_N(n_sites) * std::sqrt(kLeakageFitConstant / delta0);
}

double qtilde_fluctuating_corner(const Eigen::VectorXd& couplings) {
  // couplings(j) is k_{j+2}; the chain has N = size + 3 sites
  const Index count = couplings.size();
  const int n_sites = static_cast<int>(count) + 3;
  require_even(n_sites, "qtilde_fluctuating_corner");
  double ratio = 1.0;
  for (Index j = 0; j < count; ++j) {
    const double kj = couplings(j);
    if (kj == 0.0) throw PreconditionError("qtilde_fluctuating_corner: zero coupling");
    const Index bond = j + 2;
    ratio = (bond % 2 == 1) ? ratio * kj : ratio / kj;
  }
  return parity(n_sites / 2 - 1) * ratio;
}

}  // namespace zeno::analytic
