#include "cvxroof/solver.hpp"

#include <cassert>
#include <chrono>
#include <cmath>
#include <numbers>

namespace cvxroof {

namespace {

constexpr int kMaxRedraws = 16;

// Direction of the reported value, which can differ from the optimized
// functional: maximal stabilizer purity is reported as minimal 1 - P.
Direction reported_direction(MeasureKind kind) {
  return kind == MeasureKind::Holevo ? Direction::Maximize : Direction::Minimize;
}

bool better(Direction dir, double candidate, double incumbent) {
  return dir == Direction::Maximize ? candidate > incumbent : candidate < incumbent;
}

}  // namespace

void SolverConfig::validate(Eigen::Index dim, Eigen::Index rank) const {
  const Eigen::Index n = resolved_ensemble_size(dim);
  if (n < std::max<Eigen::Index>(rank, 1)) {
    throw InvalidInput("ensemble size " + std::to_string(n) + " is below the state rank " + std::to_string(rank));
  }
  if (n < dim) {
    // St(n, d) needs n >= d; zero-eigenvalue columns carry no weight but still occupy a column.
    throw InvalidInput("ensemble size " + std::to_string(n) + " is below the state dimension " + std::to_string(dim));
  }
  if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
  if (restarts < 1) throw InvalidInput("restarts must be at least 1");
  if (max_iterations < 0) throw InvalidInput("max_iterations must be non-negative");
  if (memory < 1) throw InvalidInput("memory must be at least 1");
  if (!(lse_temperature > 0.0)) throw InvalidInput("lse temperature must be positive");
  if (!(epsilon > 0.0)) throw InvalidInput("epsilon must be positive");
}

ConvexRoofObjective::ConvexRoofObjective(const DensityMatrix& rho, MeasureSpec spec, TrivializationKind kind,
                                         Eigen::Index ensemble_size)
    : prep_(spectral_prep(rho)), spec_(std::move(spec)), trivialization_(kind, ensemble_size, rho.dim()) {
  spec_.validate(rho.dim());
}

double ConvexRoofObjective::operator()(const RealVector& params, RealVector& grad) {
  const StiefelPoint x = trivialization_.evaluate(params);
  const AuxiliaryEnsemble ens = auxiliary_states(prep_, x);
#ifndef NDEBUG
  // Holds identically on the Stiefel manifold; a failure means a broken trivialization.
  const ComplexMatrix rho = prep_.eigenvectors * prep_.eigenvalues.asDiagonal() * prep_.eigenvectors.adjoint();
  assert((ens.reconstruct() - rho).norm() <= 1e-10);
#endif
  const ObjectiveValue obj = evaluate_objective(spec_, ens);
  grad = trivialization_.pullback(grad_wrt_stiefel(prep_, obj.grad));
  return obj.value;
}

AuxiliaryEnsemble ConvexRoofObjective::ensemble(const RealVector& params) {
  return auxiliary_states(prep_, trivialization_.evaluate(params));
}

double reported_value(const DensityMatrix& rho, const MeasureSpec& spec, double raw_objective,
                      const AuxiliaryEnsemble& ensemble, std::map<std::string, double>* extras) {
  switch (spec.kind) {
    case MeasureKind::Eof:
    case MeasureKind::LinearEntropy:
      return raw_objective;
    case MeasureKind::GeometricCoherence:
      return coherence_exact_eval(ensemble);
    case MeasureKind::StabilizerPurity: {
      const double purity = std::min(-raw_objective, 1.0);
      const auto entropy = stabilizer_entropy_from_purity(purity, spec.alpha);
      if (extras) {
        (*extras)["stabilizer_purity"] = purity;
        (*extras)["stabilizer_renyi"] = entropy.renyi;
      }
      return entropy.linear;
    }
    case MeasureKind::QfiVariance:
      return 4.0 * raw_objective;
    case MeasureKind::Holevo: {
      const double output_entropy = von_neumann_entropy(HermitianMatrix(spec.channel->apply(rho.matrix())));
      if (extras) (*extras)["output_entropy"] = output_entropy;
      return output_entropy - raw_objective;
    }
  }
  throw InvalidInput("unknown measure kind");
}

RealVector initial_parameters(TrivializationKind kind, Eigen::Index n, Eigen::Index r, Rng& rng) {
  if (kind == TrivializationKind::Polar) return polar_params(rng.complex_gaussian(n, r));
  return rng.uniform_vector(parameter_count(kind, n, r), -std::numbers::pi, std::numbers::pi);
}

SolveResult solve(const DensityMatrix& rho, MeasureSpec spec, const SolverConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  spec.stability.lse_temperature = config.lse_temperature;
  spec.stability.epsilon = config.epsilon;
  spec.validate(rho.dim());

  const Eigen::Index d = rho.dim();
  const Eigen::Index n = config.resolved_ensemble_size(d);
  ConvexRoofObjective objective(rho, spec, config.trivialization, n);
  config.validate(d, objective.prep().rank);

  LbfgsOptions options;
  options.tol = config.tol;
  options.grad_tol = config.grad_tol;
  options.max_iterations = config.max_iterations;
  options.memory = config.memory;
  const ObjectiveFn fn = [&objective](const RealVector& x, RealVector& g) {
    try {
      return objective(x, g);
    } catch (const RankDeficient&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  SolveResult result;
  bool have_best = false;
  std::string last_failure;
  for (int k = 0; k < config.restarts; ++k) {
    RestartTrace trace;
    trace.seed = config.seed + std::uint64_t(k);
    Rng rng(trace.seed);
    RealVector x0 = initial_parameters(config.trivialization, n, d, rng);
    RealVector g0(x0.size());
    while (!std::isfinite(fn(x0, g0)) && trace.redraws < kMaxRedraws) {
      ++trace.redraws;
      x0 = initial_parameters(config.trivialization, n, d, rng);
    }

    LbfgsResult run;
    try {
      run = lbfgs_minimize(fn, std::move(x0), options);
    } catch (const SolverFailure& e) {
      last_failure = e.what();
      trace.exit = "failed";
      trace.value = std::numeric_limits<double>::quiet_NaN();
      result.restarts.push_back(trace);
      continue;
    }

    AuxiliaryEnsemble ens = objective.ensemble(run.x);
    std::map<std::string, double> extras;
    trace.value = reported_value(rho, spec, run.value, ens, &extras);
    trace.raw_objective = run.value;
    trace.iterations = run.iterations;
    trace.grad_norm = run.grad_norm;
    trace.converged = run.converged;
    trace.exit = std::string(to_string(run.exit));
    result.restarts.push_back(trace);

    if (!have_best || better(reported_direction(spec.kind), trace.value, result.value)) {
      have_best = true;
      result.value = trace.value;
      result.raw_objective = run.value;
      result.ensemble = std::move(ens);
      result.parameters = std::move(run.x);
      result.converged = run.converged;
      result.best_restart = std::size_t(k);
      result.gradient_norm = run.grad_norm;
      result.extras = std::move(extras);
    }
  }
  if (!have_best) throw SolverFailure("all restarts failed: " + last_failure);

  result.reconstruction_residual = (result.ensemble.reconstruct() - rho.matrix()).norm();
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace cvxroof
