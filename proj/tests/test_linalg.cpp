#include "doctest.h"
#include "oracles.hpp"
#include "zeno/chain.hpp"
#include "zeno/linalg.hpp"

#include <numbers>

using namespace zeno;

namespace {

void check_decomposition(const SymTridiagd& m, const SpectralDecompositiond& d) {
  const Eigen::Index n = m.size();
  const Eigen::MatrixXd gram = d.eigenvectors.transpose() * d.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
  const double scale = std::max(1.0, m.max_abs_entry());
  CHECK((d.reconstruct() - m.to_dense()).cwiseAbs().maxCoeff() < 1e-10 * scale);
  for (Eigen::Index j = 1; j < n; ++j) CHECK(d.eigenvalues(j - 1) <= d.eigenvalues(j));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(d.eigenvectors(i, j)) > 1e-12) {
        CHECK(d.eigenvectors(i, j) > 0.0);
        break;
      }
    }
  }
}

}  // namespace

TEST_CASE("SymTridiag validates its shape") {
  CHECK_THROWS_AS(SymTridiagd(Eigen::VectorXd(3), Eigen::VectorXd(3)), ValidationError);
  CHECK_THROWS_AS(SymTridiagd(Eigen::VectorXd(0), Eigen::VectorXd(0)), ValidationError);
  const SymTridiagd m(Eigen::Vector3d(1, 2, 3), Eigen::Vector2d(4, 5));
  CHECK(m(0, 1) == 4.0);
  CHECK(m(2, 1) == 5.0);
  CHECK(m(0, 2) == 0.0);
  CHECK(m.reversed().diag(0) == 3.0);
}

TEST_CASE("eig_sym_tridiag: two-site coupling") {
  const double k = 0.7;
  const SymTridiagd m(Eigen::Vector2d(0, 0), Eigen::VectorXd::Constant(1, k));
  const auto d = eig_sym_tridiag(m);
  CHECK(d.eigenvalues(0) == doctest::Approx(-k).epsilon(1e-14));
  CHECK(d.eigenvalues(1) == doctest::Approx(k).epsilon(1e-14));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(d.eigenvectors(0, 0) == doctest::Approx(r));
  CHECK(d.eigenvectors(1, 0) == doctest::Approx(-r));
  CHECK(d.eigenvectors(0, 1) == doctest::Approx(r));
  CHECK(d.eigenvectors(1, 1) == doctest::Approx(r));
  check_decomposition(m, d);
}

TEST_CASE("eig_sym_tridiag: watching operator of the 4-site chain") {
  ChainSpec spec;
  spec.n_sites = 4;
  const auto chain = build_chain(spec);
  const auto d = eig_sym_tridiag(chain.h_watch);
  CHECK(d.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(std::abs(d.eigenvalues(1)) < 1e-15);
  CHECK(std::abs(d.eigenvalues(2)) < 1e-15);
  CHECK(d.eigenvalues(3) == doctest::Approx(1.0));
  check_decomposition(chain.h_watch, d);
}

TEST_CASE("eig_sym_tridiag: interior block of the 5-site chain") {
  // Characteristic polynomial of [[0,k,0],[k,0,k],[0,k,0]] is -x^3 + 2k^2 x,
  // roots {-sqrt2 k, 0, sqrt2 k}; confirm with a cofactor determinant.
  const double k = 1.3;
  const SymTridiagd m(Eigen::Vector3d::Zero(), Eigen::Vector2d(k, k));
  const auto d = eig_sym_tridiag(m);
  const Eigen::Vector3d expected(-std::sqrt(2.0) * k, 0.0, std::sqrt(2.0) * k);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(d.eigenvalues(i) - expected(i)) < 1e-12);
    const Eigen::MatrixXd shifted = m.to_dense() - expected(i) * Eigen::MatrixXd::Identity(3, 3);
    CHECK(std::abs(oracle::cofactor_det(shifted)) < 1e-12);
  }
}

TEST_CASE("eig_sym_tridiag agrees with the dense solver on random matrices") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 1 + trial % 40;
    const SymTridiagd m = oracle::random_tridiag(rng, n);
    const auto d = eig_sym_tridiag(m);
    check_decomposition(m, d);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(m.to_dense());
    CHECK((d.eigenvalues - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("eig_sym_tridiag handles large chains and degenerate blocks") {
  for (int n : {50, 121, 200}) {
    ChainSpec spec;
    spec.n_sites = n;
    spec.lambda_inv = 37.0;
    const auto chain = build_chain(spec);
    check_decomposition(chain.h_total, eig_sym_tridiag(chain.h_total));
    check_decomposition(chain.h_watch, eig_sym_tridiag(chain.h_watch));
  }
  check_decomposition(SymTridiagd::zero(6), eig_sym_tridiag(SymTridiagd::zero(6)));
}

TEST_CASE("eig_sym_tridiag reports non-convergence with the matrix size") {
  std::mt19937_64 rng(3);
  const SymTridiagd m = oracle::random_tridiag(rng, 12);
  try {
    (void)eig_sym_tridiag(m, 0);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.rows() == 12);
    CHECK(e.cols() == 12);
  }
}

TEST_CASE("eig_sym_dense shares the phase convention") {
  Eigen::Matrix3d m;
  m << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  const auto d = eig_sym_dense<double>(m);
  CHECK((d.reconstruct() - m).cwiseAbs().maxCoeff() < 1e-12);
  for (int j = 0; j < 3; ++j) CHECK(d.eigenvectors(0, j) > 0.0);
  Eigen::Matrix2d bad;
  bad << 0, 1, 2, 0;
  CHECK_THROWS_AS(eig_sym_dense<double>(bad), PreconditionError);
}

TEST_CASE("evolve: identity at t = 0 and Rabi transfer") {
  const double k = 2.0;
  const SymTridiagd m(Eigen::Vector2d(0, 0), Eigen::VectorXd::Constant(1, k));
  const auto d = eig_sym_tridiag(m);
  State psi0(2);
  psi0 << std::complex<double>(0.6, 0.0), std::complex<double>(0.0, 0.8);
  CHECK(evolve(d, psi0, 0.0) == psi0);

  const State up = basis_state<double>(2, 0);
  const State out = evolve(d, up, std::numbers::pi / (2 * k));
  CHECK(std::norm(out(0)) < 1e-24);
  CHECK(std::norm(out(1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(evolve(d, basis_state<double>(3, 0), 1.0), PreconditionError);
}

TEST_CASE("evolve matches an RK4 integrator on the 4-site chain") {
  const Eigen::MatrixXd h = oracle::chain_total(4, 1.0, 20.0);
  ChainSpec spec;
  spec.n_sites = 4;
  spec.lambda_inv = 20.0;
  const auto d = eig_sym_tridiag(build_chain(spec).h_total);
  const State psi0 = basis_state<double>(4, 0);
  // RK4 with step 1e-3: local error ~ (40 * 1e-3)^5 per step, so the
  // integrator is accurate to ~1e-7 over these times.
  State rk = psi0;
  double t_prev = 0.0;
  for (double t : {0.5, 1.0, 2.0, 3.0}) {
    rk = oracle::rk4(h, rk, t - t_prev, 1e-3);
    t_prev = t;
    const State spectral = evolve(d, psi0, t);
    CHECK((spectral - rk).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("evolve conserves norm and energy") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const SymTridiagd m = oracle::random_tridiag(rng, 3 + trial);
    const auto d = eig_sym_tridiag(m);
    State psi0 = State::Random(m.size());
    psi0.normalize();
    const SpectralPropagator<double> prop(d, psi0);
    const double e0 = std::real(psi0.dot(m * psi0));
    for (double t = 0.0; t < 50.0; t += 3.7) {
      const State psi = prop.at(t);
      CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
      const double e = std::real(psi.dot(m * psi));
      CHECK(std::abs(e - e0) <= 1e-10 * std::max(1.0, std::abs(e0)));
    }
  }
}

TEST_CASE("invert_tridiag: closed form") {
  const double k = 0.4;
  const SymTridiagd two(Eigen::Vector2d(0, 0), Eigen::VectorXd::Constant(1, k));
  const Eigen::MatrixXd inv = invert_tridiag(two);
  CHECK(std::abs(inv(0, 0)) < 1e-15);
  CHECK(std::abs(inv(1, 1)) < 1e-15);
  CHECK(inv(0, 1) == doctest::Approx(1.0 / k));
  CHECK(inv(1, 0) == doctest::Approx(1.0 / k));
}

TEST_CASE("invert_tridiag: interior block of even chains") {
  for (int n = 4; n <= 20; n += 2) {
    ChainSpec spec;
    spec.n_sites = n;
    spec.k = 1.5;
    const SymTridiagd block = interior_block(build_chain(spec).h_watch);
    const Eigen::MatrixXd inv = invert_tridiag(block);
    const double sign = ((n / 2 - 1) % 2 == 0) ? 1.0 : -1.0;
    CAPTURE(n);
    // <2|Qtilde|N-1> = -<2|(H'_w)^-1|N-1> = (-1)^{N/2-1}/k
    CHECK(-inv(0, n - 3) == doctest::Approx(sign / spec.k).epsilon(1e-12));
    CHECK(std::abs(inv(0, 0)) < 1e-12);
    CHECK(std::abs(inv(n - 3, n - 3)) < 1e-12);
    CHECK((inv * block.to_dense() - Eigen::MatrixXd::Identity(n - 2, n - 2)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("invert_tridiag equals Gaussian elimination on random matrices") {
  std::mt19937_64 rng(2024);
  for (Eigen::Index n = 2; n <= 50; ++n) {
    const SymTridiagd m = oracle::random_well_conditioned(rng, n);
    const Eigen::MatrixXd inv = invert_tridiag(m);
    CAPTURE(n);
    CHECK((inv - oracle::gaussian_inverse(m.to_dense())).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((inv * m.to_dense() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(is_symmetric<double>(inv, 1e-14));
  }
}

TEST_CASE("invert_tridiag flags the odd-chain zero mode as singular") {
  for (int n = 5; n <= 199; n += 2) {
    ChainSpec spec;
    spec.n_sites = n;
    const SymTridiagd block = interior_block(build_chain(spec).h_watch);
    CHECK_THROWS_AS(invert_tridiag(block), SingularMatrixError);
  }
  for (int n = 4; n <= 200; n += 2) {
    ChainSpec spec;
    spec.n_sites = n;
    CHECK_NOTHROW(invert_tridiag(interior_block(build_chain(spec).h_watch)));
  }
}

TEST_CASE("det_tridiag") {
  const double k = 3.0;
  CHECK(det_tridiag(SymTridiagd(Eigen::Vector2d(0, 0), Eigen::VectorXd::Constant(1, k))) == -k * k);

  ChainSpec odd;
  odd.n_sites = 5;
  CHECK(det_tridiag(interior_block(build_chain(odd).h_watch)) == 0.0);

  odd.delta_omega = 20.0;
  odd.lambda_inv = 20.0;
  const SymTridiagd modified = interior_block(build_chain(odd).watch_with_shift());
  CHECK(modified.diag(0) == doctest::Approx(1.0));
  // (-1)^{(N-3)/2} k^{N-3} lambda dw = -1 for N = 5, k = 1, lambda dw = 1
  CHECK(det_tridiag(modified) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("det_tridiag equals cofactor expansion and eigenvalue product") {
  std::mt19937_64 rng(77);
  for (Eigen::Index n = 2; n <= 10; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const SymTridiagd m = oracle::random_tridiag(rng, n);
      const double det = det_tridiag(m);
      const double cof = oracle::cofactor_det(m.to_dense());
      CHECK(std::abs(det - cof) <= 1e-12 * std::max(1.0, std::abs(cof)));
      const double prod = eig_sym_tridiag(m).eigenvalues.prod();
      CHECK(std::abs(det - prod) <= 1e-8 * std::abs(det));
    }
  }
}
