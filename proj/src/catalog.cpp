#include "cvxroof/catalog.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "cvxroof/linalg.hpp"
#include "cvxroof/random.hpp"

namespace cvxroof {

ComplexMatrix swap_operator(Eigen::Index d) {
  ComplexMatrix f = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  return f;
}

DensityMatrix werner(Eigen::Index d, double alpha) {
  if (d < 2) throw InvalidInput("werner: d must be at least 2");
  if (!(alpha >= -1.0 && alpha <= 1.0)) {
    throw InvalidState("werner: alpha = " + std::to_string(alpha) + " gives a non-PSD operator (need -1 <= alpha <= 1)");
  }
  const ComplexMatrix m = (ComplexMatrix::Identity(d * d, d * d) - alpha * swap_operator(d)) /
                          (double(d * d) - double(d) * alpha);
  return DensityMatrix::from_matrix(m, {d, d});
}

DensityMatrix noisy_coherent(Eigen::Index d, double p) {
  if (d < 1) throw InvalidInput("noisy_coherent: d must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("noisy_coherent: p must lie in [0, 1]");
  const ComplexVector plus = ComplexVector::Constant(d, 1.0 / std::sqrt(double(d)));
  const ComplexMatrix m = p * plus * plus.adjoint() + (1.0 - p) * ComplexMatrix::Identity(d, d) / double(d);
  return DensityMatrix::from_matrix(m);
}

double coherence_analytic(Eigen::Index d, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("coherence_analytic: p must lie in [0, 1]");
  const double dd = double(d);
  const double s = (dd - 1.0) * std::sqrt(1.0 - p) + std::sqrt(1.0 + (dd - 1.0) * p);
  return 1.0 - s * s / (dd * dd);
}

DensityMatrix bloch_qubit(double x, double y, double z) {
  if (x * x + y * y + z * z > 1.0 + 1e-12) throw InvalidState("bloch_qubit: vector lies outside the Bloch ball");
  ComplexMatrix m(2, 2);
  m << 1.0 + z, cplx(x, -y), cplx(x, y), 1.0 - z;
  return DensityMatrix::from_matrix(m / 2.0);
}

DensityMatrix haar_random_state(const std::vector<Eigen::Index>& dims, Eigen::Index rank, std::uint64_t seed) {
  if (dims.empty()) throw InvalidInput("haar_random_state: no dimensions given");
  const Eigen::Index d = std::accumulate(dims.begin(), dims.end(), Eigen::Index(1),
                                         [](Eigen::Index a, Eigen::Index b) { return a * b; });
  if (rank < 1 || rank > d) throw InvalidInput("haar_random_state: rank out of range");
  Rng rng(seed);
  const ComplexMatrix w = rng.complex_gaussian(d, rank);
  const ComplexMatrix m = w * w.adjoint();
  return DensityMatrix::from_matrix(m / m.trace().real(), dims.size() > 1 ? dims : std::vector<Eigen::Index>{});
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw InvalidInput("concurrence: two-qubit state required");
  ComplexMatrix yy = ComplexMatrix::Zero(4, 4);
  // sigma_y (x) sigma_y
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  // With rho = W W^dagger, the square roots of the eigenvalues of rho * flipped(rho)
  // are the singular values of W^T (sigma_y (x) sigma_y) W. This avoids the square
  // root of a near-singular matrix for low-rank states.
  const auto es = hermitian_eig(rho.hermitian());
  const RealVector weights = es.eigenvalues.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix w = es.eigenvectors * weights.asDiagonal();
  const RealVector lam = Eigen::JacobiSVD<ComplexMatrix>(ComplexMatrix(w.transpose() * yy * w)).singularValues();
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

double wootters_eof_oracle(const DensityMatrix& rho) {
  if (rho.dim() != 4 || (!rho.factors().empty() && (rho.factors().size() != 2 || rho.factors()[0] != 2))) {
    throw InvalidInput("wootters_eof_oracle: needs a 2 x 2 state");
  }
  const double c = concurrence(rho);
  const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
  auto h = [](double t) { return t > 0.0 ? -t * std::log(t) : 0.0; };
  return h(x) + h(1.0 - x);
}

double qfi_sld_oracle(const DensityMatrix& rho, const HermitianMatrix& h) {
  if (h.dim() != rho.dim()) throw InvalidInput("qfi_sld_oracle: dimension mismatch");
  const auto es = hermitian_eig(rho.hermitian());
  const ComplexMatrix hk = es.eigenvectors.adjoint() * h.matrix() * es.eigenvectors;
  double f = 0.0;
  for (Eigen::Index k = 0; k < es.dim(); ++k) {
    for (Eigen::Index l = 0; l < es.dim(); ++l) {
      const double a = std::max(es.eigenvalues(k), 0.0);
      const double b = std::max(es.eigenvalues(l), 0.0);
      if (a + b <= 1e-14) continue;
      f += 2.0 * (a - b) * (a - b) / (a + b) * std::norm(hk(k, l));
    }
  }
  return f;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, Eigen::Index d_a, Eigen::Index d_b) {
  if (m.rows() != d_a * d_b || m.cols() != d_a * d_b) throw InvalidInput("partial_transpose: dimension mismatch");
  ComplexMatrix out(m.rows(), m.cols());
  for (Eigen::Index a = 0; a < d_a; ++a)
    for (Eigen::Index c = 0; c < d_a; ++c)
      out.block(a * d_b, c * d_b, d_b, d_b) = m.block(a * d_b, c * d_b, d_b, d_b).transpose();
  return out;
}

bool ppt_check(const DensityMatrix& rho, Eigen::Index d_a, Eigen::Index d_b) {
  const auto es = hermitian_eig(HermitianMatrix(partial_transpose(rho.matrix(), d_a, d_b)));
  return es.eigenvalues(0) >= -1e-10;
}

Channel depolarizing_channel(Eigen::Index d, double lambda) {
  if (d < 1) throw InvalidInput("depolarizing_channel: d must be positive");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidInput("depolarizing_channel: lambda must lie in [0, 1]");
  const double dd = double(d);
  std::vector<ComplexMatrix> kraus;
  ComplexMatrix shift = ComplexMatrix::Zero(d, d);
  ComplexMatrix clock = ComplexMatrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    shift((j + 1) % d, j) = 1.0;
    clock(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * double(j) / dd);
  }
  ComplexMatrix xa = ComplexMatrix::Identity(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    ComplexMatrix w = xa;
    for (Eigen::Index b = 0; b < d; ++b) {
      const double weight = (a == 0 && b == 0) ? 1.0 - lambda + lambda / (dd * dd) : lambda / (dd * dd);
      if (weight > 0.0) kraus.push_back(std::sqrt(weight) * w);
      w = w * clock;
    }
    xa = shift * xa;
  }
  return Channel(std::move(kraus));
}

Channel random_channel(Eigen::Index d_in, Eigen::Index d_out, Eigen::Index count, std::uint64_t seed) {
  if (d_in < 1 || d_out < 1 || count < 1 || d_out * count < d_in) {
    throw InvalidInput("random_channel: need d_out * count >= d_in");
  }
  Rng rng(seed);
  const ComplexMatrix g = rng.complex_gaussian(d_out * count, d_in);
  const ComplexMatrix v = g * psd_inv_sqrt(HermitianMatrix(g.adjoint() * g)).matrix();
  std::vector<ComplexMatrix> kraus;
  for (Eigen::Index k = 0; k < count; ++k) kraus.push_back(v.middleRows(k * d_out, d_out));
  return Channel(std::move(kraus));
}

}  // namespace cvxroof
