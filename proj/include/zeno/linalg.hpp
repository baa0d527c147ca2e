#pragma once

// Real symmetric tridiagonal matrices and the spectral machinery built on
// them: implicit-shift QL eigendecomposition, spectral time evolution,
// closed-form tridiagonal inversion and continuant determinants.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "zeno/errors.hpp"

namespace zeno {

using Index = Eigen::Index;

template <typename Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Real symmetric tridiagonal matrix stored as its diagonal and first
/// off-diagonal. Element accessors cannot change the dimension, so a
/// constructed value always satisfies diag.size() == offdiag.size() + 1.
template <typename Real>
class SymTridiag {
 public:
  SymTridiag(Vector<Real> diag, Vector<Real> offdiag)
      : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
    if (diag_.size() < 1) throw ValidationError("size", "must be at least 1");
    if (offdiag_.size() != diag_.size() - 1)
      throw ValidationError("offdiag", "length must be size-1");
  }

  static SymTridiag zero(Index n) {
    if (n < 1) throw ValidationError("size", "must be at least 1");
    return SymTridiag(Vector<Real>::Zero(n), Vector<Real>::Zero(n - 1));
  }

  Index size() const noexcept { return diag_.size(); }
  const Vector<Real>& diag() const noexcept { return diag_; }
  const Vector<Real>& offdiag() const noexcept { return offdiag_; }
  Real& diag(Index i) { return diag_(i); }
  Real& offdiag(Index i) { return offdiag_(i); }
  Real diag(Index i) const { return diag_(i); }
  Real offdiag(Index i) const { return offdiag_(i); }

  Real operator()(Index i, Index j) const {
    if (i == j) return diag_(i);
    if (j == i + 1) return offdiag_(i);
    if (i == j + 1) return offdiag_(j);
    return Real(0);
  }

  Real max_abs_entry() const {
    Real m = diag_.cwiseAbs().maxCoeff();
    if (offdiag_.size() > 0) m = std::max(m, offdiag_.cwiseAbs().maxCoeff());
    return m;
  }

  Matrix<Real> to_dense() const {
    const Index n = size();
    Matrix<Real> m = Matrix<Real>::Zero(n, n);
    m.diagonal() = diag_;
    for (Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = offdiag_(i);
    return m;
  }

  /// Contiguous principal sub-block of `count` rows starting at `first`.
  SymTridiag block(Index first, Index count) const {
    if (first < 0 || count < 1 || first + count > size())
      throw PreconditionError("SymTridiag::block: range out of bounds");
    return SymTridiag(diag_.segment(first, count), offdiag_.segment(first, count - 1));
  }

  /// Matrix with site order reversed, i -> n-1-i.
  SymTridiag reversed() const {
    return SymTridiag(diag_.reverse().eval(), offdiag_.reverse().eval());
  }

  template <typename Derived>
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> operator*(
      const Eigen::MatrixBase<Derived>& v) const {
    using S = typename Derived::Scalar;
    const Index n = size();
    if (v.size() != n) throw PreconditionError("SymTridiag * vector: dimension mismatch");
    Eigen::Matrix<S, Eigen::Dynamic, 1> out(n);
    for (Index i = 0; i < n; ++i) {
      S acc = S(diag_(i)) * v(i);
      if (i > 0) acc += S(offdiag_(i - 1)) * v(i - 1);
      if (i + 1 < n) acc += S(offdiag_(i)) * v(i + 1);
      out(i) = acc;
    }
    return out;
  }

  friend SymTridiag operator+(const SymTridiag& a, const SymTridiag& b) {
    if (a.size() != b.size()) throw PreconditionError("SymTridiag + SymTridiag: dimension mismatch");
    return SymTridiag(a.diag_ + b.diag_, a.offdiag_ + b.offdiag_);
  }
  friend SymTridiag operator*(Real s, const SymTridiag& a) {
    return SymTridiag(s * a.diag_, s * a.offdiag_);
  }
  friend bool operator==(const SymTridiag& a, const SymTridiag& b) {
    return a.diag_ == b.diag_ && a.offdiag_ == b.offdiag_;
  }

 private:
  Vector<Real> diag_;
  Vector<Real> offdiag_;
};

/// Eigenvalues sorted ascending; column i of `eigenvectors` pairs with
/// eigenvalue i. The first component of magnitude > 1e-12 of every column is
/// positive.
template <typename Real>
struct SpectralDecomposition {
  Vector<Real> eigenvalues;
  Matrix<Real> eigenvectors;

  Index size() const noexcept { return eigenvalues.size(); }

  Matrix<Real> reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
  }
};

namespace detail {

template <typename Real>
void fix_phase(Eigen::Ref<Vector<Real>> v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > Real(1e-12)) {
      if (v(i) < 0) v = -v;
      return;
    }
  }
}

// Sort ascending; exact ties ordered lexicographically on the phase-fixed
// eigenvectors so the output is independent of solver ordering.
template <typename Real>
SpectralDecomposition<Real> canonicalize(const Vector<Real>& values, Matrix<Real> vectors) {
  const Index n = values.size();
  for (Index j = 0; j < n; ++j) fix_phase<Real>(vectors.col(j));
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (values(a) != values(b)) return values(a) < values(b);
    for (Index i = 0; i < n; ++i) {
      if (vectors(i, a) != vectors(i, b)) return vectors(i, a) > vectors(i, b);
    }
    return false;
  });
  SpectralDecomposition<Real> out{Vector<Real>(n), Matrix<Real>(n, n)};
  for (Index j = 0; j < n; ++j) {
    out.eigenvalues(j) = values(order[static_cast<std::size_t>(j)]);
    out.eigenvectors.col(j) = vectors.col(order[static_cast<std::size_t>(j)]);
  }
  return out;
}

}  // namespace detail

/// Eigendecomposition of a symmetric tridiagonal matrix by the implicit-shift
/// QL iteration (EISPACK tql2 scheme) with eigenvector accumulation.
template <typename Real>
SpectralDecomposition<Real> eig_sym_tridiag(const SymTridiag<Real>& m, int max_iterations = 60) {
  const Index n = m.size();
  Vector<Real> d = m.diag();
  Vector<Real> e = Vector<Real>::Zero(n);
  e.head(n - 1) = m.offdiag();
  Matrix<Real> z = Matrix<Real>::Identity(n, n);

  const Real eps = std::numeric_limits<Real>::epsilon();
  Real shift_sum = 0;
  Real tst1 = 0;
  for (Index l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::abs(d(l)) + std::abs(e(l)));
    Index mm = l;
    while (mm < n && std::abs(e(mm)) > eps * tst1) ++mm;
    if (mm == n) mm = n - 1;

    if (mm > l) {
      int iter = 0;
      do {
        if (++iter > max_iterations)
          throw NumericalError("eig_sym_tridiag: QL iteration did not converge", n, n);

        Real g = d(l);
        Real p = (d(l + 1) - g) / (Real(2) * e(l));
        Real r = std::hypot(p, Real(1));
        if (p < 0) r = -r;
        d(l) = e(l) / (p + r);
        d(l + 1) = e(l) * (p + r);
        const Real dl1 = d(l + 1);
        Real h = g - d(l);
        for (Index i = l + 2; i < n; ++i) d(i) -= h;
        shift_sum += h;

        p = d(mm);
        Real c = 1, c2 = 1, c3 = 1;
        const Real el1 = e(l + 1);
        Real s = 0, s2 = 0;
        for (Index i = mm - 1; i >= l; --i) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e(i);
          h = c * p;
          r = std::hypot(p, e(i));
          e(i + 1) = s * r;
          s = e(i) / r;
          c = p / r;
          p = c * d(i) - s * g;
          d(i + 1) = h + s * (c * g + s * d(i));
          for (Index k = 0; k < n; ++k) {
            h = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * h;
            z(k, i) = c * z(k, i) - s * h;
          }
        }
        p = -s * s2 * c3 * el1 * e(l) / dl1;
        e(l) = s * p;
        d(l) = c * p;
      } while (std::abs(e(l)) > eps * tst1);
    }
    d(l) += shift_sum;
    e(l) = 0;
  }
  return detail::canonicalize<Real>(d, std::move(z));
}

/// Eigendecomposition of a dense real symmetric matrix, with the same
/// ordering and phase convention as eig_sym_tridiag.
template <typename Real>
SpectralDecomposition<Real> eig_sym_dense(const Matrix<Real>& m) {
  if (m.rows() != m.cols()) throw PreconditionError("eig_sym_dense: matrix not square");
  const Real scale = std::max(Real(1), m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > Real(1e-12) * scale)
    throw PreconditionError("eig_sym_dense: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix<Real>> solver(m);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_sym_dense: eigensolver failed", m.rows(), m.cols());
  return detail::canonicalize<Real>(solver.eigenvalues(), solver.eigenvectors());
}

/// Propagates one initial state under exp(-i M t), M = V diag(eta) V^T.
/// The overlaps V^T psi0 are computed once, so each time sample costs one
/// dense matrix-vector product.
template <typename Real>
class SpectralPropagator {
 public:
  SpectralPropagator(const SpectralDecomposition<Real>& d, ComplexVector<Real> psi0)
      : eigenvalues_(d.eigenvalues), eigenvectors_(d.eigenvectors), psi0_(std::move(psi0)) {
    if (psi0_.size() != d.size()) throw PreconditionError("evolve: state dimension mismatch");
    if (std::abs(psi0_.norm() - Real(1)) > Real(1e-12))
      throw PreconditionError("evolve: initial state is not normalized");
    overlaps_ = eigenvectors_.transpose().template cast<std::complex<Real>>() * psi0_;
  }

  ComplexVector<Real> at(Real t) const {
    if (t == Real(0)) return psi0_;
    const std::complex<Real> minus_i(0, -1);
    ComplexVector<Real> phased(overlaps_.size());
    for (Index j = 0; j < overlaps_.size(); ++j)
      phased(j) = std::exp(minus_i * eigenvalues_(j) * t) * overlaps_(j);
    return eigenvectors_.template cast<std::complex<Real>>() * phased;
  }

  Index size() const noexcept { return psi0_.size(); }

 private:
  Vector<Real> eigenvalues_;
  Matrix<Real> eigenvectors_;
  ComplexVector<Real> psi0_;
  ComplexVector<Real> overlaps_;
};

template <typename Real>
ComplexVector<Real> evolve(const SpectralDecomposition<Real>& d, const ComplexVector<Real>& psi0,
                           Real t) {
  return SpectralPropagator<Real>(d, psi0).at(t);
}

template <typename Real>
ComplexVector<Real> basis_state(Index n, Index site) {
  ComplexVector<Real> v = ComplexVector<Real>::Zero(n);
  v(site) = 1;
  return v;
}

/// Determinant by the three-term continuant recursion
/// theta_i = a_i theta_{i-1} - b_{i-1}^2 theta_{i-2}.
template <typename Real>
Real det_tridiag(const SymTridiag<Real>& m) {
  Real prev = 1;
  Real cur = m.diag(0);
  for (Index i = 1; i < m.size(); ++i) {
    const Real b = m.offdiag(i - 1);
    const Real next = m.diag(i) * cur - b * b * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// Closed-form inverse of a nonsingular symmetric tridiagonal matrix from the
/// leading (theta) and trailing (phi) principal-minor recursions:
///   (T^-1)_{ij} = (-1)^{i+j} b_i ... b_{j-1} theta_{i-1} phi_{j+1} / theta_n,  i <= j.
/// The recursion runs on T / max|T| to keep minors in range. The matrix is
/// flagged singular when |det T| < 1e-12 * prod_i max_j |T_ij|.
template <typename Real>
Matrix<Real> invert_tridiag(const SymTridiag<Real>& m) {
  const Index n = m.size();
  const Real scale = m.max_abs_entry();
  if (scale == Real(0)) throw SingularMatrixError("invert_tridiag: zero matrix", n, n);
  const Vector<Real> a = m.diag() / scale;
  const Vector<Real> b = m.offdiag() / scale;

  Vector<Real> theta(n + 1);
  theta(0) = 1;
  theta(1) = a(0);
  for (Index i = 2; i <= n; ++i) theta(i) = a(i - 1) * theta(i - 1) - b(i - 2) * b(i - 2) * theta(i - 2);

  Vector<Real> phi(n + 2);
  phi(n + 1) = 0;
  phi(n) = 1;
  phi(n - 1) = a(n - 1);
  for (Index i = n - 2; i >= 0; --i) phi(i) = a(i) * phi(i + 1) - b(i) * b(i) * phi(i + 2);

  Real row_scale = 1;
  for (Index i = 0; i < n; ++i) {
    Real r = std::abs(a(i));
    if (i > 0) r = std::max(r, std::abs(b(i - 1)));
    if (i + 1 < n) r = std::max(r, std::abs(b(i)));
    row_scale *= r;
  }
  const Real det = theta(n);
  if (std::abs(det) < Real(1e-12) * row_scale)
    throw SingularMatrixError("invert_tridiag: matrix is singular", n, n);

  // theta(i): leading i x i minor. phi(j): trailing minor from row j.
  Matrix<Real> inv(n, n);
  for (Index i = 0; i < n; ++i) {
    Real bprod = 1;
    for (Index j = i; j < n; ++j) {
      if (j > i) bprod *= b(j - 1);
      const Real sign = ((i + j) % 2 == 0) ? Real(1) : Real(-1);
      inv(i, j) = sign * bprod * theta(i) * phi(j + 1) / det / scale;
      inv(j, i) = inv(i, j);
    }
  }
  return inv;
}

template <typename Real>
bool is_symmetric(const Matrix<Real>& m, Real tol = Real(1e-12)) {
  return m.rows() == m.cols() && (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

using SymTridiagd = SymTridiag<double>;
using SpectralDecompositiond = SpectralDecomposition<double>;
using DenseMatrix = Eigen::MatrixXd;
using State = Eigen::VectorXcd;

}  // namespace zeno
