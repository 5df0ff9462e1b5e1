#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cvxroof/ensemble.hpp"
#include "cvxroof/lbfgs.hpp"
#include "cvxroof/manifold.hpp"
#include "cvxroof/measures.hpp"
#include "cvxroof/random.hpp"

namespace cvxroof {

struct SolverConfig {
  std::optional<Eigen::Index> ensemble_size;  // defaults to 2d
  int restarts = 3;
  double tol = 1e-14;
  double grad_tol = -1.0;  // negative: same as tol
  int max_iterations = 1000;
  int memory = 10;
  TrivializationKind trivialization = TrivializationKind::Polar;
  std::uint64_t seed = 0;
  double lse_temperature = 0.3;
  double epsilon = std::numeric_limits<double>::min();

  Eigen::Index resolved_ensemble_size(Eigen::Index dim) const { return ensemble_size.value_or(2 * dim); }
  void validate(Eigen::Index dim, Eigen::Index rank) const;
};

struct RestartTrace {
  std::uint64_t seed = 0;
  double value = 0.0;          // reported (post-transformed) value
  double raw_objective = 0.0;  // minimized objective
  int iterations = 0;
  double grad_norm = 0.0;
  bool converged = false;
  std::string exit;
  int redraws = 0;  // rank-deficient polar starts that were re-drawn
};

struct SolveResult {
  double value = 0.0;
  double raw_objective = 0.0;
  AuxiliaryEnsemble ensemble;
  RealVector parameters;
  bool converged = false;
  std::size_t best_restart = 0;
  double gradient_norm = 0.0;
  double reconstruction_residual = 0.0;
  double wall_time = 0.0;  // seconds
  std::vector<RestartTrace> restarts;
  /// Kind-specific companions of `value`: stabilizer_purity and
  /// stabilizer_renyi for magic, output_entropy for Holevo.
  std::map<std::string, double> extras;
};

/// measure o ensemble o trivialization as a function of the raw parameters.
/// Owns its trivialization cache, so one instance per thread.
class ConvexRoofObjective {
 public:
  ConvexRoofObjective(const DensityMatrix& rho, MeasureSpec spec, TrivializationKind kind,
                      Eigen::Index ensemble_size);

  Eigen::Index parameter_count() const { return trivialization_.parameter_count(); }
  Eigen::Index ensemble_size() const { return trivialization_.n(); }
  const SpectralPrep& prep() const { return prep_; }
  const MeasureSpec& spec() const { return spec_; }

  /// Objective value; fills `grad`. Rank-deficient polar inputs propagate
  /// as RankDeficient.
  double operator()(const RealVector& params, RealVector& grad);
  AuxiliaryEnsemble ensemble(const RealVector& params);

 private:
  SpectralPrep prep_;
  MeasureSpec spec_;
  Trivialization trivialization_;
};

/// Maps the minimized objective to the reported measure: exact-max coherence,
/// 1 - purity for magic (Renyi entropy in extras), 4x for QFI, and
/// S(N(rho)) - min for the Holevo quantity.
double reported_value(const DensityMatrix& rho, const MeasureSpec& spec, double raw_objective,
                      const AuxiliaryEnsemble& ensemble, std::map<std::string, double>* extras = nullptr);

/// Multi-start L-BFGS over the trivialization parameters. Restart k uses seed
/// config.seed + k; the best restart by reported value wins.
SolveResult solve(const DensityMatrix& rho, MeasureSpec spec, const SolverConfig& config = {});

/// Random starting point for restart seeds: complex Gaussian A for polar,
/// uniform angles on (-pi, pi] otherwise.
RealVector initial_parameters(TrivializationKind kind, Eigen::Index n, Eigen::Index r, Rng& rng);

}  // namespace cvxroof
