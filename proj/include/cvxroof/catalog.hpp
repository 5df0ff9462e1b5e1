#pragma once

// Benchmark state families, channels and closed-form reference values.

#include <cstdint>
#include <vector>

#include "cvxroof/channel.hpp"
#include "cvxroof/ensemble.hpp"
#include "cvxroof/pauli.hpp"

namespace cvxroof {

/// (I - alpha F) / (d^2 - d alpha) on C^d (x) C^d, F the swap. PSD for alpha in [-1, 1].
DensityMatrix werner(Eigen::Index d, double alpha);

/// Swap operator on C^d (x) C^d.
ComplexMatrix swap_operator(Eigen::Index d);

/// p |psi+><psi+| + (1 - p) I / d, |psi+> the uniform superposition.
DensityMatrix noisy_coherent(Eigen::Index d, double p);

/// Closed-form geometric coherence of noisy_coherent(d, p):
/// 1 - [(d - 1) sqrt(1 - p) + sqrt(1 + (d - 1) p)]^2 / d^2.
double coherence_analytic(Eigen::Index d, double p);

/// (I + xX + yY + zZ) / 2
DensityMatrix bloch_qubit(double x, double y, double z);

/// W W^dagger / Tr, W a d x rank complex Gaussian matrix.
DensityMatrix haar_random_state(const std::vector<Eigen::Index>& dims, Eigen::Index rank, std::uint64_t seed);

/// Entanglement of formation of a two-qubit state in nats, from the
/// concurrence C and h((1 + sqrt(1 - C^2)) / 2) with natural logarithms.
double wootters_eof_oracle(const DensityMatrix& rho);
double concurrence(const DensityMatrix& rho);

/// 2 sum_{k,l: lambda_k + lambda_l > eps} (lambda_k - lambda_l)^2 / (lambda_k + lambda_l) |<k|H|l>|^2
double qfi_sld_oracle(const DensityMatrix& rho, const HermitianMatrix& h);

/// Partial transpose on subsystem B.
ComplexMatrix partial_transpose(const ComplexMatrix& m, Eigen::Index d_a, Eigen::Index d_b);

/// True when the partial transpose has smallest eigenvalue >= -1e-10.
bool ppt_check(const DensityMatrix& rho, Eigen::Index d_a, Eigen::Index d_b);

/// (1 - lambda) rho + lambda Tr[rho] I / d via Weyl-Heisenberg Kraus operators.
Channel depolarizing_channel(Eigen::Index d, double lambda);

/// Channel with `count` Kraus operators cut from a random isometry.
Channel random_channel(Eigen::Index d_in, Eigen::Index d_out, Eigen::Index count, std::uint64_t seed);

}  // namespace cvxroof
