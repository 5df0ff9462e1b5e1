#pragma once

// Density matrices and the auxiliary-state representation of their pure-state
// decompositions:
//   |psi~_i> = sum_j sqrt(lambda_j) X_ij |lambda_j>,   X in St(n, d),
// so that sum_i |psi~_i><psi~_i| = rho whenever X^dagger X = I.

#include <optional>
#include <vector>

#include "cvxroof/linalg.hpp"
#include "cvxroof/manifold.hpp"
#include "cvxroof/types.hpp"

namespace cvxroof {

/// Validated quantum state: PSD within 1e-10, unit trace within 1e-10, and a
/// tensor-factor list whose product is the dimension when present.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianMatrix m, std::vector<Eigen::Index> factors = {});

  template <typename Derived>
  static DensityMatrix from_matrix(const Eigen::MatrixBase<Derived>& m, std::vector<Eigen::Index> factors = {}) {
    return DensityMatrix(HermitianMatrix(m), std::move(factors));
  }

  /// |psi><psi| / <psi|psi>
  static DensityMatrix pure(const ComplexVector& psi, std::vector<Eigen::Index> factors = {});

  Eigen::Index dim() const { return m_.dim(); }
  const std::vector<Eigen::Index>& factors() const { return factors_; }
  const HermitianMatrix& hermitian() const { return m_; }
  const ComplexMatrix& matrix() const { return m_.matrix(); }

  DensityMatrix with_factors(std::vector<Eigen::Index> factors) const;

 private:
  HermitianMatrix m_;
  std::vector<Eigen::Index> factors_;
};

inline constexpr double kRankTolerance = 1e-12;

struct SpectralPrep {
  RealVector eigenvalues;      // descending, negatives clamped to zero
  ComplexMatrix eigenvectors;  // columns, matching eigenvalues
  Eigen::Index rank = 0;       // eigenvalues above kRankTolerance

  Eigen::Index dim() const { return eigenvalues.size(); }
};

SpectralPrep spectral_prep(const DensityMatrix& rho);

/// Unnormalized states stored as the columns of a d x n matrix.
struct AuxiliaryEnsemble {
  ComplexMatrix states;

  Eigen::Index dim() const { return states.rows(); }
  Eigen::Index size() const { return states.cols(); }

  /// p_i = <psi~_i|psi~_i>
  RealVector probabilities() const;
  /// Normalized |psi_i>; entries with p_i <= cutoff are returned as nullopt.
  std::vector<std::optional<ComplexVector>> normalized(double cutoff = 1e-300) const;
  /// sum_i |psi~_i><psi~_i|
  ComplexMatrix reconstruct() const { return states * states.adjoint(); }
};

/// Requires X in St(n, d) with d the state dimension.
AuxiliaryEnsemble auxiliary_states(const SpectralPrep& prep, const StiefelPoint& x);

/// Chain rule through the (linear) auxiliary map. `grad_states` holds one
/// cotangent per state as a column, in the library's gradient convention.
/// Result entry (i, j) is sqrt(lambda_j) <lambda_j | cotangent_i>.
ComplexMatrix grad_wrt_stiefel(const SpectralPrep& prep, const ComplexMatrix& grad_states);

}  // namespace cvxroof
