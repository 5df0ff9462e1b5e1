#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cvxroof {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using MatrixC = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorC = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using VectorR = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using cplx = Complex<double>;
using ComplexMatrix = MatrixC<double>;
using ComplexVector = VectorC<double>;
using RealVector = VectorR<double>;

// Error taxonomy. Every failure surfaced by the library derives from Error so
// callers can catch one type; the subclasses let the CLI and solver react to
// the specific condition (e.g. re-drawing a rank-deficient polar start).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class NotPsd : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class SolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace cvxroof
