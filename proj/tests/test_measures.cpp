#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvxroof/catalog.hpp"
#include "cvxroof/linalg.hpp"
#include "cvxroof/measures.hpp"
#include "cvxroof/random.hpp"
#include "support.hpp"

using namespace cvxroof;

namespace {

AuxiliaryEnsemble single(const ComplexVector& psi) { return {ComplexMatrix(psi.normalized())}; }

ComplexVector two_qubit(double a00, double a11) {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = a00;
  v(3) = a11;
  return v;
}

ComplexVector plus_state(Eigen::Index d) { return ComplexVector::Constant(d, 1.0 / std::sqrt(double(d))); }

ComplexVector t_state() {
  const double c = 1.0 / std::sqrt(3.0);
  return bloch_qubit(c, c, c).matrix().col(0).normalized();
}

// Random ensemble normalized so that sum_i p_i = 1, as produced by a trace-one state.
AuxiliaryEnsemble random_ensemble(Rng& rng, Eigen::Index d, Eigen::Index n) {
  ComplexMatrix s = rng.complex_gaussian(d, n);
  s /= s.norm();
  return {s};
}

// Flattens (Re, Im) of every entry, column-major.
RealVector flatten(const ComplexMatrix& m) {
  RealVector out(2 * m.size());
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    out(k) = m(k % m.rows(), k / m.rows()).real();
    out(m.size() + k) = m(k % m.rows(), k / m.rows()).imag();
  }
  return out;
}

ComplexMatrix unflatten(const RealVector& v, Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  const Eigen::Index size = rows * cols;
  for (Eigen::Index k = 0; k < size; ++k) m(k % rows, k / rows) = cplx(v(k), v(size + k));
  return m;
}

// Central differences (step 1e-6) of the objective over every real and
// imaginary entry of the auxiliary states, against the analytic gradient.
double gradient_error(const MeasureSpec& spec, const AuxiliaryEnsemble& ens) {
  const RealVector analytic = flatten(evaluate_objective(spec, ens).grad);
  const RealVector fd = testing::central_difference(
      [&](const RealVector& v) {
        return evaluate_objective(spec, AuxiliaryEnsemble{unflatten(v, ens.dim(), ens.size())}).value;
      },
      flatten(ens.states), 1e-6);
  return testing::relative_error(analytic, fd);
}

}  // namespace

TEST_CASE("xlnx") {
  CHECK(xlnx(1.0) == 0.0);
  CHECK(xlnx(0.0) == 0.0);
  CHECK(xlnx(std::numbers::e) == doctest::Approx(std::numbers::e));
  CHECK(std::isfinite(xlnx_derivative(0.0)));
  CHECK_THROWS_AS(xlnx(-1e-3), InvalidInput);
}

TEST_CASE("measure names round-trip") {
  for (auto kind : {MeasureKind::Eof, MeasureKind::LinearEntropy, MeasureKind::GeometricCoherence,
                    MeasureKind::StabilizerPurity, MeasureKind::QfiVariance, MeasureKind::Holevo}) {
    CHECK(parse_measure(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_measure("negativity"), InvalidInput);
}

TEST_CASE("entanglement of formation of pure states") {
  const Bipartition qubits{2, 2};
  CHECK(std::abs(eof_objective(single(testing::ket(4, 1)), qubits).value) < 1e-15);
  CHECK(eof_objective(single(testing::bell_state()), qubits).value == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  const double expected = -0.9 * std::log(0.9) - 0.1 * std::log(0.1);
  CHECK(eof_objective(single(two_qubit(std::sqrt(0.9), std::sqrt(0.1))), qubits).value ==
        doctest::Approx(expected).epsilon(1e-13));
  CHECK(expected == doctest::Approx(0.325083).epsilon(1e-6));
}

TEST_CASE("linear entropy of pure states") {
  const Bipartition qubits{2, 2};
  CHECK(std::abs(linear_entropy_objective(single(testing::ket(4, 2)), qubits).value) < 1e-15);
  CHECK(linear_entropy_objective(single(testing::bell_state()), qubits).value == doctest::Approx(0.5));
  CHECK(linear_entropy_objective(single(two_qubit(std::sqrt(0.9), std::sqrt(0.1))), qubits).value ==
        doctest::Approx(0.18));
  CHECK_THROWS_AS(linear_entropy_objective(single(testing::bell_state()), Bipartition{2, 3}), InvalidInput);
}

TEST_CASE("exact coherence") {
  CHECK(coherence_exact_eval(single(testing::ket(3, 0))) == 0.0);
  CHECK(coherence_exact_eval(single(plus_state(2))) == doctest::Approx(0.5));
  CHECK(coherence_exact_eval(single(plus_state(4))) == doctest::Approx(0.75));

  // Incoherent diagonal state decomposed into its eigenbasis.
  AuxiliaryEnsemble diag{ComplexMatrix::Zero(3, 3)};
  diag.states(0, 0) = std::sqrt(0.5);
  diag.states(1, 1) = std::sqrt(0.3);
  diag.states(2, 2) = std::sqrt(0.2);
  CHECK(std::abs(coherence_exact_eval(diag)) < 1e-15);
}

TEST_CASE("smoothed coherence is a lower bound within T ln d per state") {
  Rng rng(3);
  const StabilityConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index d = 2 + trial % 7;
    const auto ens = random_ensemble(rng, d, 2 * d);
    const double smoothed = coherence_objective(ens, cfg).value;
    const double exact = coherence_exact_eval(ens);
    CHECK(smoothed <= exact + 1e-15);
    CHECK(exact <= smoothed + double(ens.size()) * cfg.lse_temperature * std::log(double(d)) + 1e-15);
    for (Eigen::Index i = 0; i < ens.size(); ++i) {
      const AuxiliaryEnsemble one{ens.states.col(i)};
      const double s = coherence_objective(one, cfg).value;
      const double e = coherence_exact_eval(one);
      CHECK(s <= e + 1e-15);
      CHECK(e <= s + cfg.lse_temperature * std::log(double(d)) + 1e-15);
    }
  }
}

TEST_CASE("stabilizer purity of pure states") {
  CHECK(stabilizer_purity_objective(single(testing::ket(2, 0)), 2.0).value == doctest::Approx(-1.0));
  CHECK(stabilizer_purity_objective(single(plus_state(2)), 2.0).value == doctest::Approx(-1.0));

  // T-state: Pauli expectations (1, 1/sqrt3, 1/sqrt3, 1/sqrt3) to the fourth power, over 2.
  const double t_expected = -(1.0 + 3.0 / 9.0) / 2.0;
  CHECK(t_expected == doctest::Approx(-2.0 / 3.0));
  CHECK(stabilizer_purity_objective(single(t_state()), 2.0).value == doctest::Approx(t_expected).epsilon(1e-13));

  CHECK_THROWS_AS(stabilizer_purity_objective(single(testing::ket(3, 0)), 2.0), InvalidInput);
}

TEST_CASE("ensembles of stabilizer states have purity one") {
  // |0>, |+>, |+i> in one ensemble, and the Bell state, for several alpha.
  AuxiliaryEnsemble qubit{ComplexMatrix(2, 3)};
  qubit.states.col(0) = std::sqrt(0.5) * testing::ket(2, 0);
  qubit.states.col(1) = std::sqrt(0.3) * plus_state(2);
  qubit.states.col(2) << std::sqrt(0.2 / 2.0), cplx(0.0, std::sqrt(0.2 / 2.0));
  for (double alpha : {2.0, 3.0, 4.5}) {
    CHECK(stabilizer_purity_objective(qubit, alpha).value == doctest::Approx(-1.0).epsilon(1e-13));
    CHECK(stabilizer_purity_objective(single(testing::bell_state()), alpha).value ==
          doctest::Approx(-1.0).epsilon(1e-13));
  }
}

TEST_CASE("stabilizer entropies from purity") {
  const auto free = stabilizer_entropy_from_purity(1.0, 2.0);
  CHECK(free.renyi == 0.0);
  CHECK(free.linear == 0.0);
  const auto t = stabilizer_entropy_from_purity(2.0 / 3.0, 2.0);
  CHECK(t.renyi == doctest::Approx(std::log(1.5)));
  CHECK(t.renyi == doctest::Approx(0.405465).epsilon(1e-6));
  CHECK(t.linear == doctest::Approx(1.0 / 3.0));
  CHECK(stabilizer_entropy_from_purity(0.5, 2.0).linear == doctest::Approx(0.5));
  CHECK_NOTHROW(stabilizer_entropy_from_purity(1.0 + 5e-11, 2.0));
  CHECK_THROWS_AS(stabilizer_entropy_from_purity(0.0, 2.0), InvalidInput);
  CHECK_THROWS_AS(stabilizer_entropy_from_purity(1.01, 2.0), InvalidInput);
}

TEST_CASE("QFI variance") {
  ComplexMatrix z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  const HermitianMatrix zh(z);
  CHECK(std::abs(qfi_variance_objective(single(testing::ket(2, 1)), zh).value) < 1e-15);
  CHECK(qfi_variance_objective(single(plus_state(2)), zh).value == doctest::Approx(1.0));

  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianMatrix h(random_hermitian(rng, 3));
    CHECK(qfi_variance_objective(random_ensemble(rng, 3, 6), h).value >= -1e-14);
  }
  CHECK_THROWS_AS(qfi_variance_objective(single(plus_state(3)), zh), InvalidInput);
}

TEST_CASE("Holevo objective") {
  const Channel identity = depolarizing_channel(3, 0.0);
  Rng rng(7);
  // Pure inputs through the identity channel have pure outputs.
  AuxiliaryEnsemble ens = random_ensemble(rng, 3, 6);
  CHECK(std::abs(holevo_objective(ens, identity).value) < 1e-12);

  // The fully depolarizing channel outputs I/d regardless of the input.
  const Channel full = depolarizing_channel(3, 1.0);
  CHECK(holevo_objective(ens, full).value == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(von_neumann_entropy(HermitianMatrix(full.apply(ens.reconstruct()))) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("entanglement measures are invariant under local unitaries") {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ens = random_ensemble(rng, 6, 8);
    const ComplexMatrix ua = hermitian_expi(HermitianMatrix(random_hermitian(rng, 2)));
    const ComplexMatrix ub = hermitian_expi(HermitianMatrix(random_hermitian(rng, 3)));
    const AuxiliaryEnsemble rotated{testing::kron(ua, ub) * ens.states};
    const Bipartition parts{2, 3};
    CHECK(std::abs(eof_objective(ens, parts).value - eof_objective(rotated, parts).value) <= 1e-10);
    CHECK(std::abs(linear_entropy_objective(ens, parts).value - linear_entropy_objective(rotated, parts).value) <=
          1e-10);
  }
}

TEST_CASE("objective gradients match finite differences") {
  Rng rng(11);
  auto check_points = [&](const char* name, Eigen::Index d, const std::function<MeasureSpec(int)>& make) {
    double worst = 0.0;
    for (int point = 0; point < 20; ++point) {
      const auto spec = make(point);
      worst = std::max(worst, gradient_error(spec, random_ensemble(rng, d, 2 * d)));
    }
    INFO(name);
    CHECK(worst <= 1e-5);
  };
  check_points("eof", 6, [](int) { return MeasureSpec::eof(2, 3); });
  check_points("linear-entropy", 6, [](int) { return MeasureSpec::linear_entropy(3, 2); });
  check_points("coherence", 4, [](int) { return MeasureSpec::coherence(); });
  check_points("stabilizer-purity", 4, [](int point) { return MeasureSpec::stabilizer_purity(point % 2 ? 3.0 : 2.0); });
  check_points("qfi", 3, [&](int) { return MeasureSpec::qfi(HermitianMatrix(random_hermitian(rng, 3))); });
  check_points("holevo", 3, [](int point) { return MeasureSpec::holevo(random_channel(3, 3, 3, std::uint64_t(point))); });
}

TEST_CASE("gradients stay finite when a state vanishes") {
  Rng rng(13);
  auto ens = random_ensemble(rng, 4, 8);
  ens.states.col(3).setZero();
  for (const auto& spec : {MeasureSpec::eof(2, 2), MeasureSpec::linear_entropy(2, 2), MeasureSpec::coherence(),
                           MeasureSpec::stabilizer_purity(2.0), MeasureSpec::qfi(HermitianMatrix::identity(4)),
                           MeasureSpec::holevo(depolarizing_channel(4, 0.3))}) {
    const auto v = evaluate_objective(spec, ens);
    CHECK(std::isfinite(v.value));
    CHECK(all_finite(v.grad));
  }
}

TEST_CASE("measure spec validation") {
  CHECK_NOTHROW(MeasureSpec::eof(2, 2).validate(4));
  CHECK_THROWS_AS(MeasureSpec::eof(2, 2).validate(6), InvalidInput);
  CHECK_THROWS_AS(MeasureSpec::stabilizer_purity(2.0).validate(3), InvalidInput);
  CHECK_THROWS_AS(MeasureSpec::stabilizer_purity(1.5).validate(4), InvalidInput);
  CHECK_THROWS_AS(MeasureSpec::qfi(HermitianMatrix::identity(2)).validate(3), InvalidInput);
  CHECK(MeasureSpec::stabilizer_purity(2.0).direction() == Direction::Maximize);
  CHECK(MeasureSpec::holevo(depolarizing_channel(2, 0.1)).direction() == Direction::Maximize);
  CHECK(MeasureSpec::eof(2, 2).direction() == Direction::Minimize);
  MeasureSpec bad = MeasureSpec::coherence();
  bad.stability.lse_temperature = 0.0;
  CHECK_THROWS_AS(bad.validate(2), InvalidInput);
}
