#include "cvxroof/manifold.hpp"

#include <cmath>

namespace cvxroof {

namespace {

constexpr double kPolarSingularFloor = 1e-10;

void require_shape(Eigen::Index n, Eigen::Index r) {
  if (n < 1 || r < 1 || r > n) {
    throw InvalidInput("St(n, r) needs 1 <= r <= n, got n = " + std::to_string(n) + ", r = " + std::to_string(r));
  }
}

// sin(x) / x, accurate near zero.
double sinc(double x) {
  if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

std::string_view to_string(TrivializationKind kind) {
  switch (kind) {
    case TrivializationKind::Polar:
      return "polar";
    case TrivializationKind::MatrixExp:
      return "exp";
    case TrivializationKind::EulerHurwitz:
      return "euler";
  }
  return "?";
}

TrivializationKind parse_trivialization(std::string_view name) {
  if (name == "polar") return TrivializationKind::Polar;
  if (name == "exp" || name == "matrix-exponential") return TrivializationKind::MatrixExp;
  if (name == "euler" || name == "euler-hurwitz") return TrivializationKind::EulerHurwitz;
  throw InvalidInput("unknown trivialization '" + std::string(name) + "'");
}

Eigen::Index givens_count(Eigen::Index n, Eigen::Index r) { return n * r - r * (r + 1) / 2; }

Eigen::Index parameter_count(TrivializationKind kind, Eigen::Index n, Eigen::Index r) {
  require_shape(n, r);
  switch (kind) {
    case TrivializationKind::Polar:
      return 2 * n * r;
    case TrivializationKind::MatrixExp:
      return n * n - 1;
    case TrivializationKind::EulerHurwitz:
      return 2 * givens_count(n, r) + r;
  }
  return 0;
}

double StiefelPoint::residual() const {
  return (x.adjoint() * x - ComplexMatrix::Identity(r(), r())).norm();
}

// ---------------------------------------------------------------------------
// Gell-Mann basis

GellMannBasis::GellMannBasis(Eigen::Index n) : n_(n) {}

ComplexMatrix GellMannBasis::combine(const RealVector& theta) const {
  if (theta.size() != size()) throw InvalidInput("GellMannBasis::combine: wrong coefficient count");
  ComplexMatrix h = ComplexMatrix::Zero(n_, n_);
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < n_; ++j) {
    for (Eigen::Index k = j + 1; k < n_; ++k) {
      const double s = theta(idx++);
      const double a = theta(idx++);
      // s * (E_jk + E_kj) + a * (-i E_jk + i E_kj)
      h(j, k) += cplx(s, -a);
      h(k, j) += cplx(s, a);
    }
  }
  for (Eigen::Index l = 1; l < n_; ++l) {
    const double c = theta(idx++) * std::sqrt(2.0 / double(l * (l + 1)));
    for (Eigen::Index m = 0; m < l; ++m) h(m, m) += c;
    h(l, l) -= double(l) * c;
  }
  return h;
}

RealVector GellMannBasis::project(const ComplexMatrix& g) const {
  RealVector out(size());
  Eigen::Index idx = 0;
  for (Eigen::Index j = 0; j < n_; ++j) {
    for (Eigen::Index k = j + 1; k < n_; ++k) {
      out(idx++) = g(j, k).real() + g(k, j).real();
      out(idx++) = g(k, j).imag() - g(j, k).imag();
    }
  }
  for (Eigen::Index l = 1; l < n_; ++l) {
    double acc = 0.0;
    for (Eigen::Index m = 0; m < l; ++m) acc += g(m, m).real();
    acc -= double(l) * g(l, l).real();
    out(idx++) = acc * std::sqrt(2.0 / double(l * (l + 1)));
  }
  return out;
}

HermitianMatrix GellMannBasis::element(Eigen::Index j) const {
  RealVector e = RealVector::Zero(size());
  e(j) = 1.0;
  return HermitianMatrix(combine(e));
}

std::vector<HermitianMatrix> gellmann_basis(Eigen::Index n) {
  if (n < 2) throw InvalidInput("gellmann_basis: n must be at least 2");
  GellMannBasis basis(n);
  std::vector<HermitianMatrix> out;
  out.reserve(std::size_t(basis.size()));
  for (Eigen::Index j = 0; j < basis.size(); ++j) out.push_back(basis.element(j));
  return out;
}

// ---------------------------------------------------------------------------
// Trivialization

Trivialization::Trivialization(TrivializationKind kind, Eigen::Index n, Eigen::Index r)
    : kind_(kind), n_(n), r_(r), gellmann_(n) {
  require_shape(n, r);
  if (kind == TrivializationKind::MatrixExp && n < 2) {
    throw InvalidInput("matrix-exponential trivialization needs n >= 2");
  }
  if (kind == TrivializationKind::EulerHurwitz) {
    // Column c is reduced by rotations on rows (n-2, n-1), ..., (c, c+1).
    givens_rows_.reserve(std::size_t(givens_count(n, r)));
    for (Eigen::Index c = 0; c < r; ++c)
      for (Eigen::Index row = n - 2; row >= c; --row) givens_rows_.push_back(row);
  }
}

Eigen::Index Trivialization::parameter_count() const { return cvxroof::parameter_count(kind_, n_, r_); }

StiefelPoint Trivialization::evaluate(const RealVector& params) {
  if (params.size() != parameter_count()) {
    throw InvalidInput("trivialization '" + std::string(to_string(kind_)) + "' expects " +
                       std::to_string(parameter_count()) + " parameters, got " + std::to_string(params.size()));
  }
  evaluated_ = false;
  StiefelPoint out;
  switch (kind_) {
    case TrivializationKind::Polar:
      out = evaluate_polar(params);
      break;
    case TrivializationKind::MatrixExp:
      out = evaluate_exp(params);
      break;
    case TrivializationKind::EulerHurwitz:
      out = evaluate_euler(params);
      break;
  }
  params_ = params;
  x_ = out.x;
  evaluated_ = true;
  return out;
}

RealVector Trivialization::pullback(const ComplexMatrix& grad_x) const {
  if (!evaluated_) throw InvalidInput("Trivialization::pullback called before evaluate");
  if (grad_x.rows() != n_ || grad_x.cols() != r_) throw InvalidInput("Trivialization::pullback: gradient shape");
  switch (kind_) {
    case TrivializationKind::Polar:
      return pullback_polar(grad_x);
    case TrivializationKind::MatrixExp:
      return pullback_exp(grad_x);
    case TrivializationKind::EulerHurwitz:
      return pullback_euler(grad_x);
  }
  return {};
}

// X = A (A^dagger A)^{-1/2}
StiefelPoint Trivialization::evaluate_polar(const RealVector& params) {
  const Eigen::Index m = n_ * r_;
  a_.resize(n_, r_);
  for (Eigen::Index k = 0; k < m; ++k) a_(k % n_, k / n_) = cplx(params(k), params(m + k));
  gram_eig_ = hermitian_eig(HermitianMatrix(a_.adjoint() * a_));
  const double smallest = gram_eig_.eigenvalues(0);
  if (!(smallest > kPolarSingularFloor * kPolarSingularFloor)) {
    throw RankDeficient("polar trivialization: A is rank deficient (smallest singular value " +
                        std::to_string(std::sqrt(std::max(smallest, 0.0))) + ")");
  }
  inv_sqrt_ = gram_eig_.apply([](double x) { return 1.0 / std::sqrt(x); });
  return {a_ * inv_sqrt_};
}

// With B = A^dagger A, S = B^{1/2}, R = S^{-1} and X = A R:
//   Abar = Xbar R + 2 A Bbar,
//   Rbar = herm(A^dagger Xbar), Sbar = -R Rbar R, Bbar = sqrt_adjoint(B, Sbar).
RealVector Trivialization::pullback_polar(const ComplexMatrix& grad_x) const {
  const ComplexMatrix& r = inv_sqrt_;
  const ComplexMatrix r_bar = hermitian_part(ComplexMatrix(a_.adjoint() * grad_x));
  const ComplexMatrix s_bar = -(r * r_bar * r);
  const HermitianMatrix b_bar = sqrt_adjoint(gram_eig_, s_bar);
  const ComplexMatrix a_bar = grad_x * r + 2.0 * a_ * b_bar.matrix();

  const Eigen::Index m = n_ * r_;
  RealVector out(2 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const cplx v = a_bar(k % n_, k / n_);
    out(k) = v.real();
    out(m + k) = v.imag();
  }
  return out;
}

// X = first r columns of exp(i sum_j theta_j M_j)
StiefelPoint Trivialization::evaluate_exp(const RealVector& params) {
  gram_eig_ = hermitian_eig(HermitianMatrix(gellmann_.combine(params)));
  return {hermitian_expi(gram_eig_).leftCols(r_)};
}

// For U = f(H) with f(x) = exp(ix), the adjoint in the eigenbasis of H is the
// Hadamard product with the conjugated divided differences of f.
RealVector Trivialization::pullback_exp(const ComplexMatrix& grad_x) const {
  const ComplexMatrix& v = gram_eig_.eigenvectors;
  const RealVector& lam = gram_eig_.eigenvalues;
  // V^dagger [Gx, 0] V
  ComplexMatrix g = (v.adjoint() * grad_x) * v.topRows(r_);
  for (Eigen::Index l = 0; l < n_; ++l) {
    for (Eigen::Index k = 0; k < n_; ++k) {
      const double half_gap = 0.5 * (lam(k) - lam(l));
      const cplx dd = cplx(0.0, 1.0) * std::polar(1.0, 0.5 * (lam(k) + lam(l))) * sinc(half_gap);
      g(k, l) *= std::conj(dd);
    }
  }
  return gellmann_.project(v * g * v.adjoint());
}

// X = G_1^dagger G_2^dagger ... G_K^dagger D(varphi)
StiefelPoint Trivialization::evaluate_euler(const RealVector& params) {
  const Eigen::Index k_count = Eigen::Index(givens_rows_.size());
  ComplexMatrix y = ComplexMatrix::Zero(n_, r_);
  for (Eigen::Index c = 0; c < r_; ++c) y(c, c) = std::polar(1.0, params(2 * k_count + c));
  for (Eigen::Index k = k_count - 1; k >= 0; --k) {
    const Eigen::Index row = givens_rows_[std::size_t(k)];
    const auto block = givens_block(params(k), params(k_count + k));
    y.middleRows(row, 2) = block.adjoint() * y.middleRows(row, 2);
  }
  return {y};
}

RealVector Trivialization::pullback_euler(const ComplexMatrix& grad_x) const {
  const Eigen::Index k_count = Eigen::Index(givens_rows_.size());
  RealVector out(parameter_count());
  ComplexMatrix y = x_;         // Y^(k-1)
  ComplexMatrix y_bar = grad_x;  // cotangent of Y^(k-1)
  const cplx i1(0.0, 1.0);
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const Eigen::Index row = givens_rows_[std::size_t(k)];
    const double theta = params_(k);
    const double phi = params_(k_count + k);
    const auto block = givens_block(theta, phi);
    // Y^(k) = G_k Y^(k-1), the input of the k-th factor G_k^dagger.
    y.middleRows(row, 2) = block * y.middleRows(row, 2);

    const cplx e = std::polar(1.0, phi);
    const cplx ec = std::conj(e);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Eigen::Matrix2cd d_theta;
    d_theta << -ec * s, -ec * c, e * c, -e * s;
    Eigen::Matrix2cd d_phi;
    d_phi << -i1 * ec * c, i1 * ec * s, i1 * e * s, i1 * e * c;

    const auto yb = y_bar.middleRows(row, 2);
    const auto yk = y.middleRows(row, 2);
    out(k) = (yb.conjugate().cwiseProduct(d_theta * yk)).sum().real();
    out(k_count + k) = (yb.conjugate().cwiseProduct(d_phi * yk)).sum().real();

    y_bar.middleRows(row, 2) = block * y_bar.middleRows(row, 2);
  }
  for (Eigen::Index c = 0; c < r_; ++c) {
    const cplx dd = i1 * std::polar(1.0, params_(2 * k_count + c));
    out(2 * k_count + c) = (std::conj(y_bar(c, c)) * dd).real();
  }
  return out;
}

// ---------------------------------------------------------------------------

StiefelPoint polar_trivialize(const RealVector& params, Eigen::Index n, Eigen::Index r) {
  return Trivialization(TrivializationKind::Polar, n, r).evaluate(params);
}

StiefelPoint exp_trivialize(const RealVector& params, Eigen::Index n, Eigen::Index r) {
  return Trivialization(TrivializationKind::MatrixExp, n, r).evaluate(params);
}

StiefelPoint euler_trivialize(const RealVector& params, Eigen::Index n, Eigen::Index r) {
  return Trivialization(TrivializationKind::EulerHurwitz, n, r).evaluate(params);
}

RealVector polar_params(const ComplexMatrix& a) {
  const Eigen::Index m = a.size();
  RealVector out(2 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const cplx v = a(k % a.rows(), k / a.rows());
    out(k) = v.real();
    out(m + k) = v.imag();
  }
  return out;
}

RealVector pullback_gradient(TrivializationKind kind, const RealVector& params, Eigen::Index n, Eigen::Index r,
                             const ComplexMatrix& grad_x) {
  Trivialization t(kind, n, r);
  t.evaluate(params);
  return t.pullback(grad_x);
}

}  // namespace cvxroof
