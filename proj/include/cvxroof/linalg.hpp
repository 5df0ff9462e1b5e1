#pragma once

// Dense complex kernel: Hermitian eigendecomposition and the spectral
// functions built on it (square root, inverse square root, exp(iH)), the
// Sylvester-based adjoint of the square root, partial traces and Givens
// rotations. Everything is templated on the real scalar type.

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "cvxroof/types.hpp"

namespace cvxroof {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  // Evaluate once: indexing a lazy product expression would redo the product per entry.
  const typename Derived::PlainObject plain = m;
  for (Eigen::Index j = 0; j < plain.cols(); ++j) {
    for (Eigen::Index i = 0; i < plain.rows(); ++i) {
      const auto v = plain(i, j);
      if (!std::isfinite(std::real(v)) || !std::isfinite(std::imag(v))) return false;
    }
  }
  return true;
}

/// (M + M^dagger) / 2.
template <typename Derived>
auto hermitian_part(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  Plain out = (m + m.adjoint()) / typename Derived::RealScalar(2);
  return out;
}

/// Square complex matrix that is Hermitian by construction. The input is
/// symmetrized, so small asymmetries from file round-off are absorbed.
template <typename Scalar>
class Hermitian {
 public:
  using Matrix = MatrixC<Scalar>;

  Hermitian() = default;

  template <typename Derived>
  explicit Hermitian(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) {
      throw InvalidInput("Hermitian: matrix is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
    }
    const Matrix plain = m;
    if (!all_finite(plain)) throw InvalidInput("Hermitian: non-finite entry");
    m_ = hermitian_part(plain);
  }

  static Hermitian identity(Eigen::Index dim) { return Hermitian(Matrix::Identity(dim, dim)); }
  static Hermitian zero(Eigen::Index dim) { return Hermitian(Matrix::Zero(dim, dim)); }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Complex<Scalar> operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Matrix m_;
};

using HermitianMatrix = Hermitian<double>;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
template <typename Scalar>
struct EigenSystem {
  VectorR<Scalar> eigenvalues;
  MatrixC<Scalar> eigenvectors;

  Eigen::Index dim() const { return eigenvalues.size(); }

  /// U f(Lambda) U^dagger for an elementwise real function f.
  template <typename F>
  MatrixC<Scalar> apply(F&& f) const {
    VectorC<Scalar> diag(dim());
    for (Eigen::Index k = 0; k < dim(); ++k) diag(k) = f(eigenvalues(k));
    return eigenvectors * diag.asDiagonal() * eigenvectors.adjoint();
  }
};

// Tridiagonalization + implicit QL (Eigen's SelfAdjointEigenSolver) is
// deterministic for a fixed input, which restart reproducibility relies on.
template <typename Scalar>
EigenSystem<Scalar> hermitian_eig(const Hermitian<Scalar>& m) {
  Eigen::SelfAdjointEigenSolver<MatrixC<Scalar>> solver(m.matrix());
  if (solver.info() != Eigen::Success) throw InvalidInput("hermitian_eig: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace detail {

template <typename Scalar>
constexpr Scalar kClampBelow = Scalar(1e-12);
template <typename Scalar>
constexpr Scalar kRejectBelow = Scalar(-1e-8);
template <typename Scalar>
constexpr Scalar kFullRankFloor = Scalar(1e-14);

template <typename Scalar>
void require_psd(const EigenSystem<Scalar>& es, const char* who) {
  if (es.dim() > 0 && es.eigenvalues(0) < kRejectBelow<Scalar>) {
    throw NotPsd(std::string(who) + ": smallest eigenvalue " + std::to_string(double(es.eigenvalues(0))) +
                 " is below -1e-8");
  }
}

template <typename Scalar>
void require_full_rank(const EigenSystem<Scalar>& es, const char* who) {
  if (es.dim() > 0 && !(es.eigenvalues(0) > kFullRankFloor<Scalar>)) {
    throw RankDeficient(std::string(who) + ": smallest eigenvalue " +
                        std::to_string(double(es.eigenvalues(0))) + " is not above 1e-14");
  }
}

}  // namespace detail

template <typename Scalar>
Hermitian<Scalar> psd_sqrt(const EigenSystem<Scalar>& es) {
  detail::require_psd(es, "psd_sqrt");
  return Hermitian<Scalar>(es.apply([](Scalar x) { return std::sqrt(x > Scalar(0) ? x : Scalar(0)); }));
}

/// Principal square root of a PSD matrix. Eigenvalues in [-1e-8, 0) are
/// treated as round-off and clamped to zero.
template <typename Scalar>
Hermitian<Scalar> psd_sqrt(const Hermitian<Scalar>& m) {
  return psd_sqrt(hermitian_eig(m));
}

template <typename Scalar>
Hermitian<Scalar> psd_inv_sqrt(const EigenSystem<Scalar>& es) {
  detail::require_full_rank(es, "psd_inv_sqrt");
  return Hermitian<Scalar>(es.apply([](Scalar x) { return Scalar(1) / std::sqrt(x); }));
}

template <typename Scalar>
Hermitian<Scalar> psd_inv_sqrt(const Hermitian<Scalar>& m) {
  return psd_inv_sqrt(hermitian_eig(m));
}

/// Pullback of S = sqrt(M) given the eigensystem of M.
///
/// The forward derivative satisfies the Sylvester equation S dS + dS S = dM.
/// The operator X -> S X + X S is self-adjoint, so the cotangent of M solves
/// S Mbar + Mbar S = Sbar. In the eigenbasis of M this is an elementwise
/// division by s_k + s_l, which stays well conditioned when eigenvalues
/// cluster or coincide.
template <typename Scalar, typename Derived>
Hermitian<Scalar> sqrt_adjoint(const EigenSystem<Scalar>& es, const Eigen::MatrixBase<Derived>& cotangent) {
  detail::require_full_rank(es, "sqrt_adjoint");
  const auto& u = es.eigenvectors;
  MatrixC<Scalar> c = u.adjoint() * hermitian_part(MatrixC<Scalar>(cotangent)) * u;
  const Eigen::Index n = es.dim();
  VectorR<Scalar> s(n);
  for (Eigen::Index k = 0; k < n; ++k) s(k) = std::sqrt(es.eigenvalues(k));
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index k = 0; k < n; ++k) c(k, l) /= (s(k) + s(l));
  }
  return Hermitian<Scalar>(u * c * u.adjoint());
}

template <typename Scalar>
Hermitian<Scalar> sqrt_adjoint(const Hermitian<Scalar>& m, const Hermitian<Scalar>& cotangent) {
  if (m.dim() != cotangent.dim()) throw InvalidInput("sqrt_adjoint: dimension mismatch");
  return sqrt_adjoint(hermitian_eig(m), cotangent.matrix());
}

/// exp(iH) = V exp(i Lambda) V^dagger.
template <typename Scalar>
MatrixC<Scalar> hermitian_expi(const EigenSystem<Scalar>& es) {
  VectorC<Scalar> phases(es.dim());
  for (Eigen::Index k = 0; k < es.dim(); ++k) phases(k) = std::polar(Scalar(1), es.eigenvalues(k));
  return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

template <typename Scalar>
MatrixC<Scalar> hermitian_expi(const Hermitian<Scalar>& h) {
  return hermitian_expi(hermitian_eig(h));
}

enum class Subsystem { A, B };

/// Partial trace of an operator on C^{dA} (x) C^{dB}, keeping `keep`.
/// Basis ordering is the Kronecker one: index = a * dB + b.
template <typename Derived>
typename Derived::PlainObject partial_trace(const Eigen::MatrixBase<Derived>& m, Eigen::Index d_a,
                                            Eigen::Index d_b, Subsystem keep) {
  if (d_a < 1 || d_b < 1 || m.rows() != d_a * d_b || m.cols() != d_a * d_b) {
    throw InvalidInput("partial_trace: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                       " but factors are " + std::to_string(d_a) + "x" + std::to_string(d_b));
  }
  using Plain = typename Derived::PlainObject;
  if (keep == Subsystem::A) {
    Plain out = Plain::Zero(d_a, d_a);
    for (Eigen::Index i = 0; i < d_a; ++i)
      for (Eigen::Index j = 0; j < d_a; ++j)
        for (Eigen::Index b = 0; b < d_b; ++b) out(i, j) += m(i * d_b + b, j * d_b + b);
    return out;
  }
  Plain out = Plain::Zero(d_b, d_b);
  for (Eigen::Index a = 0; a < d_a; ++a) out += m.block(a * d_b, a * d_b, d_b, d_b);
  return out;
}

template <typename Scalar>
Hermitian<Scalar> partial_trace(const Hermitian<Scalar>& m, Eigen::Index d_a, Eigen::Index d_b, Subsystem keep) {
  return Hermitian<Scalar>(partial_trace(m.matrix(), d_a, d_b, keep));
}

/// 2x2 active block of a Givens rotation acting on rows (s, s+1):
///   [ e^{i phi} cos t    e^{-i phi} sin t ]
///   [ -e^{i phi} sin t   e^{-i phi} cos t ]
template <typename Scalar>
Eigen::Matrix<Complex<Scalar>, 2, 2> givens_block(Scalar theta, Scalar phi) {
  const Complex<Scalar> ep = std::polar(Scalar(1), phi);
  const Complex<Scalar> em = std::conj(ep);
  const Scalar c = std::cos(theta);
  const Scalar s = std::sin(theta);
  Eigen::Matrix<Complex<Scalar>, 2, 2> g;
  g << ep * c, em * s, -ep * s, em * c;
  return g;
}

/// n x n Givens rotation acting on coordinates (s, s+1), counted from 1,
/// so 1 <= s <= n-1.
template <typename Scalar>
MatrixC<Scalar> givens(Eigen::Index n, Eigen::Index s, Scalar theta, Scalar phi) {
  if (n < 2 || s < 1 || s > n - 1) {
    throw InvalidInput("givens: s = " + std::to_string(s) + " out of range for n = " + std::to_string(n));
  }
  MatrixC<Scalar> g = MatrixC<Scalar>::Identity(n, n);
  g.block(s - 1, s - 1, 2, 2) = givens_block(theta, phi);
  return g;
}

}  // namespace cvxroof
