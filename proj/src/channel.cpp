#include "cvxroof/channel.hpp"

#include <string>

#include "cvxroof/linalg.hpp"

namespace cvxroof {

Channel::Channel(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw InvalidInput("channel needs at least one Kraus operator");
  output_dim_ = kraus_.front().rows();
  input_dim_ = kraus_.front().cols();
  ComplexMatrix completeness = ComplexMatrix::Zero(input_dim_, input_dim_);
  for (const auto& k : kraus_) {
    if (k.rows() != output_dim_ || k.cols() != input_dim_) {
      throw InvalidInput("Kraus operators must share one shape");
    }
    if (!all_finite(k)) throw InvalidInput("Kraus operator has a non-finite entry");
    completeness += k.adjoint() * k;
  }
  const double defect = (completeness - ComplexMatrix::Identity(input_dim_, input_dim_)).norm();
  if (defect > 1e-10) {
    throw InvalidInput("Kraus operators are not trace preserving (||sum K^dagger K - I|| = " +
                       std::to_string(defect) + ")");
  }
}

ComplexMatrix Channel::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out = ComplexMatrix::Zero(output_dim_, output_dim_);
  for (const auto& k : kraus_) out += k * rho * k.adjoint();
  return out;
}

ComplexMatrix Channel::apply_adjoint(const ComplexMatrix& w) const {
  ComplexMatrix out = ComplexMatrix::Zero(input_dim_, input_dim_);
  for (const auto& k : kraus_) out += k.adjoint() * w * k;
  return out;
}

}  // namespace cvxroof
