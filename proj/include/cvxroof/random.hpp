#pragma once

#include <cstdint>
#include <random>

#include "cvxroof/types.hpp"

namespace cvxroof {

/// Seeded generator with platform-independent output: mt19937_64 is fully
/// specified by the standard, and the uniform/normal transforms below are
/// written out instead of relying on implementation-defined distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (lo, hi].
  double uniform(double lo, double hi) { return hi - (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; caches the second variate.
  double normal();

  /// Real and imaginary parts i.i.d. standard normal.
  cplx complex_normal() {
    const double re = normal();
    return {re, normal()};
  }

  ComplexMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols);
  RealVector uniform_vector(Eigen::Index size, double lo, double hi);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Random Hermitian matrix (G + G^dagger) / 2 with G complex Gaussian.
ComplexMatrix random_hermitian(Rng& rng, Eigen::Index dim);

}  // namespace cvxroof
