#pragma once

// Trivializations R^p -> St(n, r) = { X in C^{n x r} : X^dagger X = I_r }.
//
// Gradient convention used throughout the library: for a real objective f of
// a complex matrix X, the gradient is the complex matrix
//   G = df/dRe(X) + i df/dIm(X)   (twice the Wirtinger derivative d f / d conj(X)),
// so that df = Re Tr(G^dagger dX). Optimizers only ever see real vectors.

#include <string>
#include <string_view>
#include <vector>

#include "cvxroof/linalg.hpp"
#include "cvxroof/types.hpp"

namespace cvxroof {

enum class TrivializationKind { Polar, MatrixExp, EulerHurwitz };

std::string_view to_string(TrivializationKind kind);
/// Accepts "polar", "exp"/"matrix-exponential", "euler"/"euler-hurwitz".
TrivializationKind parse_trivialization(std::string_view name);

/// Length of the raw parameter vector: 2nr (polar), n^2 - 1 (matrix
/// exponential, global phase dropped), 2nr - r^2 (Euler-Hurwitz).
Eigen::Index parameter_count(TrivializationKind kind, Eigen::Index n, Eigen::Index r);

/// Number of Givens factors in the Euler-Hurwitz product, nr - r(r+1)/2.
Eigen::Index givens_count(Eigen::Index n, Eigen::Index r);

struct StiefelPoint {
  ComplexMatrix x;

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index r() const { return x.cols(); }
  /// ||X^dagger X - I||_F
  double residual() const;
};

/// Generalized Gell-Mann basis of traceless Hermitian n x n matrices, with
/// Tr[M_i M_j] = 2 delta_ij. Ordering: for each pair j < k the symmetric then
/// the antisymmetric element, followed by the n - 1 diagonal elements.
/// Never materialized for the optimizer: combinations and projections are
/// computed from the sparse structure.
class GellMannBasis {
 public:
  explicit GellMannBasis(Eigen::Index n);

  Eigen::Index dim() const { return n_; }
  Eigen::Index size() const { return n_ * n_ - 1; }

  /// sum_j theta_j M_j
  ComplexMatrix combine(const RealVector& theta) const;
  /// Re Tr[G^dagger M_j] for every j.
  RealVector project(const ComplexMatrix& g) const;
  HermitianMatrix element(Eigen::Index j) const;

 private:
  Eigen::Index n_;
};

std::vector<HermitianMatrix> gellmann_basis(Eigen::Index n);

/// Forward map plus the cached intermediates needed for its pullback.
/// Not safe to share between threads; each optimizer run owns one.
class Trivialization {
 public:
  Trivialization(TrivializationKind kind, Eigen::Index n, Eigen::Index r);

  TrivializationKind kind() const { return kind_; }
  Eigen::Index n() const { return n_; }
  Eigen::Index r() const { return r_; }
  Eigen::Index parameter_count() const;

  /// Throws RankDeficient on the measure-zero polar inputs with
  /// smallest singular value <= 1e-10.
  StiefelPoint evaluate(const RealVector& params);

  /// Gradient with respect to the parameters passed to the last evaluate().
  RealVector pullback(const ComplexMatrix& grad_x) const;

 private:
  StiefelPoint evaluate_polar(const RealVector& params);
  StiefelPoint evaluate_exp(const RealVector& params);
  StiefelPoint evaluate_euler(const RealVector& params);
  RealVector pullback_polar(const ComplexMatrix& grad_x) const;
  RealVector pullback_exp(const ComplexMatrix& grad_x) const;
  RealVector pullback_euler(const ComplexMatrix& grad_x) const;

  TrivializationKind kind_;
  Eigen::Index n_;
  Eigen::Index r_;

  bool evaluated_ = false;
  RealVector params_;
  ComplexMatrix a_;
  EigenSystem<double> gram_eig_;
  ComplexMatrix inv_sqrt_;
  GellMannBasis gellmann_;
  std::vector<Eigen::Index> givens_rows_;
  ComplexMatrix x_;
};

StiefelPoint polar_trivialize(const RealVector& params, Eigen::Index n, Eigen::Index r);
StiefelPoint exp_trivialize(const RealVector& params, Eigen::Index n, Eigen::Index r);
StiefelPoint euler_trivialize(const RealVector& params, Eigen::Index n, Eigen::Index r);

/// Polar parameters for a given complex matrix A: real parts then imaginary
/// parts, each column-major.
RealVector polar_params(const ComplexMatrix& a);

RealVector pullback_gradient(TrivializationKind kind, const RealVector& params, Eigen::Index n, Eigen::Index r,
                             const ComplexMatrix& grad_x);

}  // namespace cvxroof
