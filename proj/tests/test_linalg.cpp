#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cvxroof/linalg.hpp"
#include "cvxroof/random.hpp"
#include "support.hpp"

using namespace cvxroof;

namespace {

HermitianMatrix diag(std::initializer_list<double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) v(k++) = x;
  return HermitianMatrix(ComplexMatrix(v.cast<cplx>().asDiagonal()));
}

HermitianMatrix random_spd(Rng& rng, Eigen::Index n, double shift) {
  const ComplexMatrix g = rng.complex_gaussian(n, n);
  return HermitianMatrix(ComplexMatrix(g * g.adjoint() + shift * ComplexMatrix::Identity(n, n)));
}

}  // namespace

TEST_CASE("hermitian_eig sorts eigenvalues ascending") {
  const auto es = hermitian_eig(diag({2.0, 1.0}));
  CHECK(es.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(es.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(std::abs(std::abs(es.eigenvectors(1, 0)) - 1.0) < 1e-15);
  CHECK(std::abs(std::abs(es.eigenvectors(0, 1)) - 1.0) < 1e-15);
}

TEST_CASE("hermitian_eig of Pauli X") {
  ComplexMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  const auto es = hermitian_eig(HermitianMatrix(x));
  CHECK(es.eigenvalues(0) == doctest::Approx(-1.0));
  CHECK(es.eigenvalues(1) == doctest::Approx(1.0));
  const ComplexVector plus = es.eigenvectors.col(1);
  CHECK(std::abs(std::abs(plus(0)) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(plus(0) - plus(1)) < 1e-15);
}

TEST_CASE("hermitian_eig reconstructs random matrices") {
  Rng rng(3);
  for (Eigen::Index n : {1, 2, 6, 17, 64}) {
    const HermitianMatrix h(random_hermitian(rng, n));
    const auto es = hermitian_eig(h);
    const ComplexMatrix back = es.eigenvectors * es.eigenvalues.cast<cplx>().asDiagonal() * es.eigenvectors.adjoint();
    const double scale = std::max(1.0, h.matrix().norm());
    CHECK((back - h.matrix()).norm() <= 1e-12 * scale);
    const ComplexMatrix gram = es.eigenvectors.adjoint() * es.eigenvectors;
    CHECK((gram - ComplexMatrix::Identity(n, n)).norm() <= 1e-12 * double(n));
    for (Eigen::Index k = 1; k < n; ++k) CHECK(es.eigenvalues(k - 1) <= es.eigenvalues(k));
  }
}

TEST_CASE("Hermitian rejects bad input") {
  CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix::Zero(2, 3)), InvalidInput);
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = std::nan("");
  CHECK_THROWS_AS(HermitianMatrix{m}, InvalidInput);
}

TEST_CASE("psd_sqrt examples") {
  const auto id = psd_sqrt(HermitianMatrix::identity(3));
  CHECK((id.matrix() - ComplexMatrix::Identity(3, 3)).norm() < 1e-15);

  const auto s = psd_sqrt(diag({4.0, 9.0}));
  CHECK((s.matrix() - diag({2.0, 3.0}).matrix()).norm() < 1e-14);

  Rng rng(5);
  const auto m = random_spd(rng, 6, 0.0);
  const auto r = psd_sqrt(m);
  CHECK((r.matrix() * r.matrix() - m.matrix()).norm() <= 1e-12 * m.matrix().norm());
  CHECK(hermitian_eig(r).eigenvalues(0) >= 0.0);
}

TEST_CASE("psd_sqrt clamps round-off and rejects indefinite input") {
  const auto s = psd_sqrt(diag({1.0, -1e-12}));
  CHECK(std::abs(s(1, 1)) == 0.0);
  CHECK_THROWS_AS(psd_sqrt(diag({1.0, -1e-6})), NotPsd);
}

TEST_CASE("psd_inv_sqrt examples") {
  const auto id = psd_inv_sqrt(HermitianMatrix::identity(4));
  CHECK((id.matrix() - ComplexMatrix::Identity(4, 4)).norm() < 1e-15);

  const auto q = psd_inv_sqrt(diag({4.0, 4.0}));
  CHECK((q.matrix() - 0.5 * ComplexMatrix::Identity(2, 2)).norm() < 1e-15);

  Rng rng(8);
  const ComplexMatrix a = rng.complex_gaussian(7, 4);
  const HermitianMatrix gram(ComplexMatrix(a.adjoint() * a));
  const auto w = psd_inv_sqrt(gram);
  const ComplexMatrix x = a * w.matrix();
  CHECK((x.adjoint() * x - ComplexMatrix::Identity(4, 4)).norm() < 1e-12);

  CHECK_THROWS_AS(psd_inv_sqrt(diag({1.0, 0.0})), RankDeficient);
}

TEST_CASE("sqrt_adjoint closed forms") {
  Rng rng(11);
  const HermitianMatrix g(random_hermitian(rng, 3));
  const auto at_identity = sqrt_adjoint(HermitianMatrix::identity(3), g);
  CHECK((at_identity.matrix() - 0.5 * g.matrix()).norm() < 1e-14);

  // Diagonal M and diagonal cotangent: Mbar_kk = g_k / (2 sqrt(m_k)).
  const auto d = sqrt_adjoint(diag({1.0, 4.0, 9.0}), diag({1.0, 2.0, 3.0}));
  CHECK(d(0, 0).real() == doctest::Approx(0.5));
  CHECK(d(1, 1).real() == doctest::Approx(0.5));
  CHECK(d(2, 2).real() == doctest::Approx(0.5));
  CHECK(std::abs(d(0, 1)) < 1e-15);
}

TEST_CASE("sqrt_adjoint matches finite differences of Re Tr[G sqrt(M)]") {
  Rng rng(13);
  auto check = [&](const HermitianMatrix& m) {
    const HermitianMatrix g(random_hermitian(rng, m.dim()));
    const HermitianMatrix dm(random_hermitian(rng, m.dim()));
    const auto adj = sqrt_adjoint(m, g);
    auto f = [&](double t) {
      const HermitianMatrix shifted(ComplexMatrix(m.matrix() + t * dm.matrix()));
      return (g.matrix() * psd_sqrt(shifted).matrix()).trace().real();
    };
    const double h = 1e-5;
    const double fd = (f(h) - f(-h)) / (2.0 * h);
    const double analytic = (adj.matrix() * dm.matrix()).trace().real();
    CHECK(std::abs(fd - analytic) <= 1e-5 * std::max(1.0, std::abs(analytic)));
  };
  for (int trial = 0; trial < 5; ++trial) check(random_spd(rng, 4, 0.5));

  // Nearly degenerate spectrum: eigenvalues 1, 1 + 1e-6, 2, 3 in a random basis.
  const auto es = hermitian_eig(HermitianMatrix(random_hermitian(rng, 4)));
  RealVector lam(4);
  lam << 1.0, 1.0 + 1e-6, 2.0, 3.0;
  const ComplexMatrix clustered = es.eigenvectors * lam.cast<cplx>().asDiagonal() * es.eigenvectors.adjoint();
  for (int trial = 0; trial < 3; ++trial) check(HermitianMatrix(clustered));
}

TEST_CASE("hermitian_expi examples") {
  const auto e0 = hermitian_expi(HermitianMatrix::zero(3));
  CHECK((e0 - ComplexMatrix::Identity(3, 3)).norm() < 1e-15);

  const auto e1 = hermitian_expi(diag({std::numbers::pi, 0.0}));
  CHECK(std::abs(e1(0, 0) - cplx(-1.0, 0.0)) < 1e-15);
  CHECK(std::abs(e1(1, 1) - cplx(1.0, 0.0)) < 1e-15);

  Rng rng(17);
  const auto u = hermitian_expi(HermitianMatrix(random_hermitian(rng, 9)));
  CHECK((u.adjoint() * u - ComplexMatrix::Identity(9, 9)).norm() < 1e-13);
}

TEST_CASE("partial_trace examples") {
  Rng rng(19);
  const ComplexMatrix ga = rng.complex_gaussian(2, 2);
  const ComplexMatrix gb = rng.complex_gaussian(3, 3);
  const ComplexMatrix a = ga * ga.adjoint() / (ga * ga.adjoint()).trace();
  const ComplexMatrix b = gb * gb.adjoint() / (gb * gb.adjoint()).trace();
  const ComplexMatrix ab = testing::kron(a, b);
  CHECK((partial_trace(ab, 2, 3, Subsystem::A) - a).norm() < 1e-14);
  CHECK((partial_trace(ab, 2, 3, Subsystem::B) - b).norm() < 1e-14);

  const ComplexVector bell = testing::bell_state();
  const ComplexMatrix bell_rho = bell * bell.adjoint();
  CHECK((partial_trace(bell_rho, 2, 2, Subsystem::A) - 0.5 * ComplexMatrix::Identity(2, 2)).norm() < 1e-15);
  CHECK((partial_trace(bell_rho, 2, 2, Subsystem::B) - 0.5 * ComplexMatrix::Identity(2, 2)).norm() < 1e-15);

  // Trace is preserved and the reduced operator is Hermitian for random input.
  const ComplexMatrix g = rng.complex_gaussian(6, 6);
  const ComplexMatrix rho = g * g.adjoint();
  const ComplexMatrix ra = partial_trace(rho, 2, 3, Subsystem::A);
  CHECK(std::abs(ra.trace() - rho.trace()) < 1e-12);
  CHECK((ra - ra.adjoint()).norm() < 1e-14);

  // Tracing out B then A of a tripartite operator equals tracing out (B, C) at once.
  const ComplexMatrix g3 = rng.complex_gaussian(12, 12);
  const ComplexMatrix rho3 = g3 * g3.adjoint();
  const ComplexMatrix keep_ab = partial_trace(rho3, 6, 2, Subsystem::A);
  const ComplexMatrix keep_a = partial_trace(keep_ab, 2, 3, Subsystem::A);
  CHECK((keep_a - partial_trace(rho3, 2, 6, Subsystem::A)).norm() < 1e-12);

  CHECK_THROWS_AS(partial_trace(rho, 2, 2, Subsystem::A), InvalidInput);
}

TEST_CASE("givens examples") {
  const auto id = givens(3, 1, 0.0, 0.0);
  CHECK((id - ComplexMatrix::Identity(3, 3)).norm() == 0.0);

  const auto g = givens(2, 1, std::numbers::pi / 2, 0.0);
  ComplexMatrix expected(2, 2);
  expected << 0.0, 1.0, -1.0, 0.0;
  CHECK((g - expected).norm() < 1e-15);

  Rng rng(23);
  for (Eigen::Index s = 1; s <= 4; ++s) {
    const auto u = givens(5, s, rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
    CHECK((u.adjoint() * u - ComplexMatrix::Identity(5, 5)).norm() < 1e-14);
    // Only rows and columns s, s+1 (counted from 1) differ from the identity.
    ComplexMatrix outside = u - ComplexMatrix::Identity(5, 5);
    outside.block(s - 1, s - 1, 2, 2).setZero();
    CHECK(outside.norm() == 0.0);
  }

  CHECK_THROWS_AS(givens(3, 0, 0.1, 0.2), InvalidInput);
  CHECK_THROWS_AS(givens(3, 3, 0.1, 0.2), InvalidInput);
  CHECK_THROWS_AS(givens(1, 1, 0.1, 0.2), InvalidInput);
}
