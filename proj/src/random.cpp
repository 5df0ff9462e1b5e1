#include "cvxroof/random.hpp"

#include <cmath>
#include <numbers>

namespace cvxroof {

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

ComplexMatrix Rng::complex_gaussian(Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
  return m;
}

RealVector Rng::uniform_vector(Eigen::Index size, double lo, double hi) {
  RealVector v(size);
  for (Eigen::Index k = 0; k < size; ++k) v(k) = uniform(lo, hi);
  return v;
}

ComplexMatrix random_hermitian(Rng& rng, Eigen::Index dim) {
  const ComplexMatrix g = rng.complex_gaussian(dim, dim);
  return (g + g.adjoint()) / 2.0;
}

}  // namespace cvxroof
