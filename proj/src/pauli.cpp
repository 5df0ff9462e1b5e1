#include "cvxroof/pauli.hpp"

#include <bit>
#include <map>
#include <mutex>

namespace cvxroof {

namespace {

cplx i_power(int k) {
  switch (k & 3) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, 1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, -1.0};
  }
}

}  // namespace

void PauliString::apply(const cplx* in, cplx* out, Eigen::Index dim) const {
  const cplx global = i_power(std::popcount(x & z));
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto uj = std::uint32_t(j);
    const double sign = (std::popcount(uj & z) & 1) ? -1.0 : 1.0;
    out[uj ^ x] = global * sign * in[j];
  }
}

double PauliString::expectation(const cplx* v, Eigen::Index dim) const {
  cplx acc = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto uj = std::uint32_t(j);
    const cplx term = std::conj(v[uj ^ x]) * v[j];
    acc += (std::popcount(uj & z) & 1) ? -term : term;
  }
  return (i_power(std::popcount(x & z)) * acc).real();
}

ComplexMatrix PauliString::matrix(int n_qubits) const {
  const Eigen::Index dim = Eigen::Index(1) << n_qubits;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  ComplexVector e = ComplexVector::Zero(dim);
  ComplexVector col(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    e.setZero();
    e(j) = 1.0;
    apply(e.data(), col.data(), dim);
    m.col(j) = col;
  }
  return m;
}

std::string PauliString::label(int n_qubits) const {
  std::string out;
  for (int q = 0; q < n_qubits; ++q) {
    const int bit = n_qubits - 1 - q;
    const bool xb = (x >> bit) & 1u;
    const bool zb = (z >> bit) & 1u;
    out.push_back(xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I'));
  }
  return out;
}

PauliSet::PauliSet(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 12) throw InvalidInput("pauli_group: qubit count must be in [1, 12]");
  const std::size_t count = std::size_t(1) << (2 * n_qubits);
  strings_.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    PauliString p;
    // Base-4 digits of k, most significant digit on qubit 0: I, X, Y, Z.
    for (int q = 0; q < n_qubits; ++q) {
      const auto digit = (k >> (2 * (n_qubits - 1 - q))) & 3u;
      const std::uint32_t bit = 1u << (n_qubits - 1 - q);
      if (digit == 1 || digit == 2) p.x |= bit;
      if (digit == 2 || digit == 3) p.z |= bit;
    }
    strings_.push_back(p);
  }
}

std::shared_ptr<const PauliSet> pauli_group(int n_qubits) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const PauliSet>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n_qubits];
  if (!slot) slot = std::make_shared<const PauliSet>(n_qubits);
  return slot;
}

int qubit_count(Eigen::Index dim) {
  if (dim < 2 || !std::has_single_bit(std::uint64_t(dim))) {
    throw InvalidInput("dimension " + std::to_string(dim) + " is not a power of two (>= 2)");
  }
  return std::countr_zero(std::uint64_t(dim));
}

}  // namespace cvxroof
