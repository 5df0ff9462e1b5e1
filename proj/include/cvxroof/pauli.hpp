#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cvxroof/types.hpp"

namespace cvxroof {

/// n-qubit Pauli operator i^{|x & z|} X^x Z^z, encoded by bit masks.
/// Qubit 0 is the leftmost tensor factor (most significant bit).
struct PauliString {
  std::uint32_t x = 0;
  std::uint32_t z = 0;

  /// (P v)_{j ^ x} = phase(j) v_j
  void apply(const cplx* in, cplx* out, Eigen::Index dim) const;
  /// <v|P|v>, real because P is Hermitian.
  double expectation(const cplx* v, Eigen::Index dim) const;
  ComplexMatrix matrix(int n_qubits) const;
  std::string label(int n_qubits) const;
};

class PauliSet {
 public:
  explicit PauliSet(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dim() const { return Eigen::Index(1) << n_qubits_; }
  std::size_t size() const { return strings_.size(); }
  const std::vector<PauliString>& strings() const { return strings_; }
  const PauliString& operator[](std::size_t k) const { return strings_[k]; }

 private:
  int n_qubits_;
  std::vector<PauliString> strings_;
};

/// The 4^n Pauli strings, built once per qubit count and shared read-only.
std::shared_ptr<const PauliSet> pauli_group(int n_qubits);

/// Qubit count for a power-of-two dimension; throws InvalidInput otherwise.
int qubit_count(Eigen::Index dim);

}  // namespace cvxroof
