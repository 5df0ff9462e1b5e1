#include "cvxroof/measures.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cvxroof/pauli.hpp"

namespace cvxroof {

namespace {

void require_parts(const AuxiliaryEnsemble& ens, Bipartition parts) {
  if (parts.d_a < 1 || parts.d_b < 1 || parts.d_a * parts.d_b != ens.dim()) {
    throw InvalidInput("bipartition " + std::to_string(parts.d_a) + "x" + std::to_string(parts.d_b) +
                       " does not match state dimension " + std::to_string(ens.dim()));
  }
}

// Column i of the ensemble viewed as the d_a x d_b coefficient matrix
// M(a, b) = psi(a * d_b + b).
ComplexMatrix coefficient_matrix(const AuxiliaryEnsemble& ens, Eigen::Index i, Bipartition parts) {
  return Eigen::Map<const ComplexMatrix>(ens.states.col(i).data(), parts.d_b, parts.d_a).transpose();
}

void store_coefficient_gradient(ComplexMatrix& grad, Eigen::Index i, const ComplexMatrix& g_m,
                                Bipartition parts) {
  Eigen::Map<ComplexMatrix>(grad.col(i).data(), parts.d_b, parts.d_a) = g_m.transpose();
}

// sum_j xlnx(lambda_j) and its matrix gradient f'(K) for a PSD operator K.
struct TraceXlnx {
  double value = 0.0;
  ComplexMatrix derivative;
};

TraceXlnx trace_xlnx(const ComplexMatrix& k, double eps) {
  const auto es = hermitian_eig(HermitianMatrix(k));
  TraceXlnx out;
  for (Eigen::Index j = 0; j < es.dim(); ++j) out.value += xlnx(std::max(es.eigenvalues(j), 0.0), eps);
  out.derivative = es.apply([eps](double x) { return xlnx_derivative(std::max(x, 0.0), eps); });
  return out;
}

}  // namespace

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Eof:
      return "eof";
    case MeasureKind::LinearEntropy:
      return "linear-entropy";
    case MeasureKind::GeometricCoherence:
      return "coherence";
    case MeasureKind::StabilizerPurity:
      return "stabilizer-purity";
    case MeasureKind::QfiVariance:
      return "qfi";
    case MeasureKind::Holevo:
      return "holevo";
  }
  return "?";
}

MeasureKind parse_measure(std::string_view name) {
  if (name == "eof" || name == "entanglement-of-formation") return MeasureKind::Eof;
  if (name == "linear-entropy") return MeasureKind::LinearEntropy;
  if (name == "coherence" || name == "geometric-coherence") return MeasureKind::GeometricCoherence;
  if (name == "stabilizer-purity" || name == "magic") return MeasureKind::StabilizerPurity;
  if (name == "qfi" || name == "qfi-variance") return MeasureKind::QfiVariance;
  if (name == "holevo") return MeasureKind::Holevo;
  throw InvalidInput("unknown measure '" + std::string(name) + "'");
}

void StabilityConfig::validate() const {
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
  if (!(lse_temperature > 0.0)) throw InvalidInput("log-sum-exp temperature must be positive");
}

MeasureSpec MeasureSpec::eof(Eigen::Index d_a, Eigen::Index d_b) {
  MeasureSpec s;
  s.kind = MeasureKind::Eof;
  s.bipartition = {d_a, d_b};
  return s;
}

MeasureSpec MeasureSpec::linear_entropy(Eigen::Index d_a, Eigen::Index d_b) {
  MeasureSpec s;
  s.kind = MeasureKind::LinearEntropy;
  s.bipartition = {d_a, d_b};
  return s;
}

MeasureSpec MeasureSpec::coherence() {
  MeasureSpec s;
  s.kind = MeasureKind::GeometricCoherence;
  return s;
}

MeasureSpec MeasureSpec::stabilizer_purity(double alpha) {
  MeasureSpec s;
  s.kind = MeasureKind::StabilizerPurity;
  s.alpha = alpha;
  return s;
}

MeasureSpec MeasureSpec::qfi(HermitianMatrix observable) {
  MeasureSpec s;
  s.kind = MeasureKind::QfiVariance;
  s.observable = std::move(observable);
  return s;
}

MeasureSpec MeasureSpec::holevo(Channel channel) {
  MeasureSpec s;
  s.kind = MeasureKind::Holevo;
  s.channel = std::make_shared<const Channel>(std::move(channel));
  return s;
}

Direction MeasureSpec::direction() const {
  return (kind == MeasureKind::StabilizerPurity || kind == MeasureKind::Holevo) ? Direction::Maximize
                                                                                 : Direction::Minimize;
}

void MeasureSpec::validate(Eigen::Index dim) const {
  stability.validate();
  switch (kind) {
    case MeasureKind::Eof:
    case MeasureKind::LinearEntropy:
      if (bipartition.d_a < 1 || bipartition.d_b < 1 || bipartition.d_a * bipartition.d_b != dim) {
        throw InvalidInput("bipartition " + std::to_string(bipartition.d_a) + "x" +
                           std::to_string(bipartition.d_b) + " does not match state dimension " +
                           std::to_string(dim));
      }
      break;
    case MeasureKind::GeometricCoherence:
      break;
    case MeasureKind::StabilizerPurity:
      qubit_count(dim);
      if (!(alpha >= 2.0)) throw InvalidInput("stabilizer purity needs alpha >= 2");
      break;
    case MeasureKind::QfiVariance:
      if (!observable) throw InvalidInput("qfi needs an observable");
      if (observable->dim() != dim) throw InvalidInput("observable dimension does not match the state");
      break;
    case MeasureKind::Holevo:
      if (!channel) throw InvalidInput("holevo needs a channel");
      if (channel->input_dim() != dim) throw InvalidInput("channel input dimension does not match the state");
      break;
  }
}

double xlnx(double x, double eps) {
  if (x < 0.0 || std::isnan(x)) throw InvalidInput("xlnx: negative argument");
  return x > eps ? x * std::log(x) : x * std::log(eps);
}

double xlnx_derivative(double x, double eps) { return x > eps ? std::log(x) + 1.0 : std::log(eps); }

ObjectiveValue eof_objective(const AuxiliaryEnsemble& ens, Bipartition parts, const StabilityConfig& cfg) {
  require_parts(ens, parts);
  const double eps = cfg.epsilon;
  ObjectiveValue out{0.0, ComplexMatrix::Zero(ens.dim(), ens.size())};
  const bool keep_a = parts.d_a <= parts.d_b;
  for (Eigen::Index i = 0; i < ens.size(); ++i) {
    const double p = ens.states.col(i).squaredNorm();
    const ComplexMatrix m = coefficient_matrix(ens, i, parts);
    // Tr f(M M^dagger) = Tr f(M^dagger M) for f(0) = 0: use the smaller factor.
    ComplexMatrix g_m;
    double trace_term = 0.0;
    if (keep_a) {
      const auto t = trace_xlnx(m * m.adjoint(), eps);
      trace_term = t.value;
      g_m = 2.0 * t.derivative * m;
    } else {
      const auto t = trace_xlnx(m.adjoint() * m, eps);
      trace_term = t.value;
      g_m = 2.0 * m * t.derivative;
    }
    out.value += xlnx(p, eps) - trace_term;
    store_coefficient_gradient(out.grad, i, -g_m, parts);
    out.grad.col(i) += 2.0 * xlnx_derivative(p, eps) * ens.states.col(i);
  }
  return out;
}

ObjectiveValue linear_entropy_objective(const AuxiliaryEnsemble& ens, Bipartition parts,
                                        const StabilityConfig& cfg) {
  require_parts(ens, parts);
  ObjectiveValue out{1.0, ComplexMatrix::Zero(ens.dim(), ens.size())};
  for (Eigen::Index i = 0; i < ens.size(); ++i) {
    const double p = ens.states.col(i).squaredNorm();
    const ComplexMatrix m = coefficient_matrix(ens, i, parts);
    const ComplexMatrix reduced = m * m.adjoint();
    const double purity = reduced.squaredNorm();
    const ComplexMatrix d_purity = 4.0 * reduced * m;
    ComplexMatrix g_m;
    if (p < cfg.epsilon) {
      out.value -= purity / cfg.epsilon;
      g_m = -d_purity / cfg.epsilon;
      store_coefficient_gradient(out.grad, i, g_m, parts);
    } else {
      out.value -= purity / p;
      g_m = -d_purity / p;
      store_coefficient_gradient(out.grad, i, g_m, parts);
      out.grad.col(i) += (2.0 * purity / (p * p)) * ens.states.col(i);
    }
  }
  return out;
}

ObjectiveValue coherence_objective(const AuxiliaryEnsemble& ens, const StabilityConfig& cfg) {
  const double t = cfg.lse_temperature;
  ObjectiveValue out{1.0, ComplexMatrix::Zero(ens.dim(), ens.size())};
  RealVector weights(ens.dim());
  for (Eigen::Index i = 0; i < ens.size(); ++i) {
    const RealVector x = ens.states.col(i).cwiseAbs2();
    const double top = x.maxCoeff();
    weights = ((x.array() - top) / t).exp().matrix();
    const double z = weights.sum();
    out.value -= top + t * std::log(z);
    weights /= z;
    out.grad.col(i) = -2.0 * (weights.cast<cplx>().array() * ens.states.col(i).array()).matrix();
  }
  return out;
}

double coherence_exact_eval(const AuxiliaryEnsemble& ens) {
  double value = 1.0;
  for (Eigen::Index i = 0; i < ens.size(); ++i) value -= ens.states.col(i).cwiseAbs2().maxCoeff();
  return value;
}

ObjectiveValue stabilizer_purity_objective(const AuxiliaryEnsemble& ens, double alpha, const StabilityConfig& cfg) {
  if (!(alpha >= 2.0)) throw InvalidInput("stabilizer purity needs alpha >= 2");
  const int n_qubits = qubit_count(ens.dim());
  const auto paulis = pauli_group(n_qubits);
  const Eigen::Index d = ens.dim();
  const double scale = std::ldexp(1.0, -n_qubits);
  ObjectiveValue out{0.0, ComplexMatrix::Zero(d, ens.size())};
  ComplexVector pv(d);
  ComplexVector grad_s(d);
  for (Eigen::Index i = 0; i < ens.size(); ++i) {
    const cplx* v = ens.states.col(i).data();
    const double p = ens.states.col(i).squaredNorm();
    double s = 0.0;
    grad_s.setZero();
    for (const auto& pauli : paulis->strings()) {
      const double e = pauli.expectation(v, d);
      const double ae = std::abs(e);
      if (ae == 0.0) continue;
      s += std::pow(ae, 2.0 * alpha);
      pauli.apply(v, pv.data(), d);
      grad_s += (4.0 * alpha * std::pow(ae, 2.0 * alpha - 2.0) * e) * pv;
    }
    const double q = std::pow(p, 2.0 * alpha - 1.0);
    if (q < cfg.epsilon) {
      out.value -= scale * s / cfg.epsilon;
      out.grad.col(i) = -scale * grad_s / cfg.epsilon;
    } else {
      out.value -= scale * s / q;
      const double dq = (2.0 * alpha - 1.0) * std::pow(p, 2.0 * alpha - 2.0);
      out.grad.col(i) = -scale * (grad_s / q - (s / (q * q)) * dq * 2.0 * ens.states.col(i));
    }
  }
  return out;
}

StabilizerEntropy stabilizer_entropy_from_purity(double purity, double alpha) {
  if (!(purity > 0.0) || purity > 1.0 + 1e-10) {
    throw InvalidInput("stabilizer purity " + std::to_string(purity) + " is outside (0, 1]");
  }
  if (alpha == 1.0) throw InvalidInput("Renyi index alpha = 1 is not supported");
  return {std::log(purity) / (1.0 - alpha), 1.0 - purity};
}

ObjectiveValue qfi_variance_objective(const AuxiliaryEnsemble& ens, const HermitianMatrix& h,
                                      const StabilityConfig& cfg) {
  if (h.dim() != ens.dim()) throw InvalidInput("qfi: observable dimension does not match the ensemble");
  const ComplexMatrix hv = h.matrix() * ens.states;
  const ComplexMatrix h2v = h.matrix() * hv;
  ObjectiveValue out{0.0, ComplexMatrix::Zero(ens.dim(), ens.size())};
  for (Eigen::Index i = 0; i < ens.size(); ++i) {
    const auto v = ens.states.col(i);
    const double p = v.squaredNorm();
    const double second = hv.col(i).squaredNorm();
    const double first = v.dot(hv.col(i)).real();  // <v|H|v>
    const bool clamped = p < cfg.epsilon;
    const double denom = clamped ? cfg.epsilon : p;
    out.value += second - first * first / denom;
    out.grad.col(i) = 2.0 * h2v.col(i) - (4.0 * first / denom) * hv.col(i);
    if (!clamped) out.grad.col(i) += (2.0 * first * first / (p * p)) * v;
  }
  return out;
}

ObjectiveValue holevo_objective(const AuxiliaryEnsemble& ens, const Channel& channel, const StabilityConfig& cfg) {
  if (channel.input_dim() != ens.dim()) throw InvalidInput("holevo: channel input dimension mismatch");
  const double eps = cfg.epsilon;
  ObjectiveValue out{0.0, ComplexMatrix::Zero(ens.dim(), ens.size())};
  for (Eigen::Index i = 0; i < ens.size(); ++i) {
    const ComplexVector v = ens.states.col(i);
    const double p = v.squaredNorm();
    const auto t = trace_xlnx(channel.apply(v * v.adjoint()), eps);
    out.value += xlnx(p, eps) - t.value;
    out.grad.col(i) = 2.0 * xlnx_derivative(p, eps) * v - 2.0 * channel.apply_adjoint(t.derivative) * v;
  }
  return out;
}

ObjectiveValue evaluate_objective(const MeasureSpec& spec, const AuxiliaryEnsemble& ens) {
  switch (spec.kind) {
    case MeasureKind::Eof:
      return eof_objective(ens, spec.bipartition, spec.stability);
    case MeasureKind::LinearEntropy:
      return linear_entropy_objective(ens, spec.bipartition, spec.stability);
    case MeasureKind::GeometricCoherence:
      return coherence_objective(ens, spec.stability);
    case MeasureKind::StabilizerPurity:
      return stabilizer_purity_objective(ens, spec.alpha, spec.stability);
    case MeasureKind::QfiVariance:
      if (!spec.observable) throw InvalidInput("qfi needs an observable");
      return qfi_variance_objective(ens, *spec.observable, spec.stability);
    case MeasureKind::Holevo:
      if (!spec.channel) throw InvalidInput("holevo needs a channel");
      return holevo_objective(ens, *spec.channel, spec.stability);
  }
  throw InvalidInput("unknown measure kind");
}

double von_neumann_entropy(const HermitianMatrix& rho) {
  const auto es = hermitian_eig(rho);
  double s = 0.0;
  for (Eigen::Index j = 0; j < es.dim(); ++j) s -= xlnx(std::max(es.eigenvalues(j), 0.0));
  return s;
}

}  // namespace cvxroof
