#pragma once

#include <vector>

#include "cvxroof/types.hpp"

namespace cvxroof {

/// Quantum channel in Kraus form, N(rho) = sum_k K_k rho K_k^dagger.
/// Construction enforces sum_k K_k^dagger K_k = I within 1e-10.
class Channel {
 public:
  explicit Channel(std::vector<ComplexMatrix> kraus);

  Eigen::Index input_dim() const { return input_dim_; }
  Eigen::Index output_dim() const { return output_dim_; }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

  ComplexMatrix apply(const ComplexMatrix& rho) const;
  /// sum_k K_k^dagger W K_k, the adjoint map.
  ComplexMatrix apply_adjoint(const ComplexMatrix& w) const;

 private:
  std::vector<ComplexMatrix> kraus_;
  Eigen::Index input_dim_ = 0;
  Eigen::Index output_dim_ = 0;
};

}  // namespace cvxroof
