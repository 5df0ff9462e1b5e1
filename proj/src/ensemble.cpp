#include "cvxroof/ensemble.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace cvxroof {

namespace {

constexpr double kStateTolerance = 1e-10;

void validate_state(const EigenSystem<double>& es, double trace) {
  if (std::abs(trace - 1.0) > kStateTolerance) {
    throw InvalidState("density matrix trace is " + std::to_string(trace) + ", expected 1");
  }
  if (es.dim() > 0 && es.eigenvalues(0) < -kStateTolerance) {
    throw InvalidState("density matrix is not PSD (smallest eigenvalue " + std::to_string(es.eigenvalues(0)) + ")");
  }
}

}  // namespace

DensityMatrix::DensityMatrix(HermitianMatrix m, std::vector<Eigen::Index> factors)
    : m_(std::move(m)), factors_(std::move(factors)) {
  if (m_.dim() < 1) throw InvalidState("density matrix must be at least 1x1");
  validate_state(hermitian_eig(m_), m_.matrix().trace().real());
  if (!factors_.empty()) {
    const Eigen::Index prod = std::accumulate(factors_.begin(), factors_.end(), Eigen::Index(1),
                                              [](Eigen::Index a, Eigen::Index b) { return a * b; });
    for (const auto f : factors_)
      if (f < 1) throw InvalidInput("subsystem dimensions must be positive");
    if (prod != m_.dim()) {
      throw InvalidInput("subsystem dimensions multiply to " + std::to_string(prod) + " but the state has dimension " +
                         std::to_string(m_.dim()));
    }
  }
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi, std::vector<Eigen::Index> factors) {
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 0.0)) throw InvalidState("cannot build a pure state from the zero vector");
  return from_matrix(psi * psi.adjoint() / norm2, std::move(factors));
}

DensityMatrix DensityMatrix::with_factors(std::vector<Eigen::Index> factors) const {
  return DensityMatrix(m_, std::move(factors));
}

SpectralPrep spectral_prep(const DensityMatrix& rho) {
  const auto es = hermitian_eig(rho.hermitian());
  validate_state(es, rho.matrix().trace().real());
  const Eigen::Index d = es.dim();
  SpectralPrep prep;
  prep.eigenvalues.resize(d);
  prep.eigenvectors.resize(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::Index src = d - 1 - k;
    // Eigenvalues at or below the rank tolerance are round-off; zero them so
    // their eigenvectors carry no amplitude.
    prep.eigenvalues(k) = es.eigenvalues(src) > kRankTolerance ? es.eigenvalues(src) : 0.0;
    prep.eigenvectors.col(k) = es.eigenvectors.col(src);
    if (prep.eigenvalues(k) > kRankTolerance) ++prep.rank;
  }
  return prep;
}

RealVector AuxiliaryEnsemble::probabilities() const { return states.colwise().squaredNorm().transpose(); }

std::vector<std::optional<ComplexVector>> AuxiliaryEnsemble::normalized(double cutoff) const {
  std::vector<std::optional<ComplexVector>> out;
  out.reserve(std::size_t(size()));
  for (Eigen::Index i = 0; i < size(); ++i) {
    const double p = states.col(i).squaredNorm();
    if (p > cutoff) {
      out.emplace_back(ComplexVector(states.col(i) / std::sqrt(p)));
    } else {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

// Psi = V diag(sqrt(lambda)) X^T
AuxiliaryEnsemble auxiliary_states(const SpectralPrep& prep, const StiefelPoint& x) {
  if (x.r() != prep.dim()) {
    throw InvalidInput("auxiliary_states: Stiefel point has " + std::to_string(x.r()) +
                       " columns, state dimension is " + std::to_string(prep.dim()));
  }
  const RealVector sqrt_lambda = prep.eigenvalues.cwiseSqrt();
  return {prep.eigenvectors * sqrt_lambda.asDiagonal() * x.x.transpose()};
}

ComplexMatrix grad_wrt_stiefel(const SpectralPrep& prep, const ComplexMatrix& grad_states) {
  if (grad_states.rows() != prep.dim()) throw InvalidInput("grad_wrt_stiefel: cotangent dimension mismatch");
  const RealVector sqrt_lambda = prep.eigenvalues.cwiseSqrt();
  return (sqrt_lambda.asDiagonal() * (prep.eigenvectors.adjoint() * grad_states)).transpose();
}

}  // namespace cvxroof
