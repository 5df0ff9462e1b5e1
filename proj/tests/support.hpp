#pragma once

// Helpers shared by the unit tests: finite differences over real parameter
// vectors and small constructors for common states.

#include <cmath>
#include <functional>

#include "cvxroof/types.hpp"

namespace cvxroof::testing {

/// Central differences of f at x with step h.
inline RealVector central_difference(const std::function<double(const RealVector&)>& f, const RealVector& x,
                                     double h) {
  RealVector g(x.size());
  RealVector xp = x;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    xp(k) = x(k) + h;
    const double fp = f(xp);
    xp(k) = x(k) - h;
    const double fm = f(xp);
    xp(k) = x(k);
    g(k) = (fp - fm) / (2.0 * h);
  }
  return g;
}

/// Directional derivative of a real function of a complex matrix, for the
/// convention df = Re Tr(G^dagger dX).
inline double directional_difference(const std::function<double(const ComplexMatrix&)>& f, const ComplexMatrix& x,
                                     const ComplexMatrix& direction, double h) {
  return (f(x + h * direction) - f(x - h * direction)) / (2.0 * h);
}

inline double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace().real();
}

inline double relative_error(const RealVector& a, const RealVector& b) {
  const double scale = std::max({a.norm(), b.norm(), 1e-12});
  return (a - b).norm() / scale;
}

/// Kronecker product a (x) b.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Computational basis vector |k> in C^d.
inline ComplexVector ket(Eigen::Index d, Eigen::Index k) {
  ComplexVector v = ComplexVector::Zero(d);
  v(k) = 1.0;
  return v;
}

/// (|00> + |11>) / sqrt(2)
inline ComplexVector bell_state() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

}  // namespace cvxroof::testing
