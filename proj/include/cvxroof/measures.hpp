#pragma once

// Pure-state functionals averaged over an auxiliary ensemble, written in the
// unnormalized quantities p_i = <psi~_i|psi~_i> and reduced/output operators of
// |psi~_i>, together with their gradients with respect to the states.

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "cvxroof/channel.hpp"
#include "cvxroof/ensemble.hpp"
#include "cvxroof/linalg.hpp"

namespace cvxroof {

enum class MeasureKind { Eof, LinearEntropy, GeometricCoherence, StabilizerPurity, QfiVariance, Holevo };

std::string_view to_string(MeasureKind kind);
/// Accepts the CLI names: eof, linear-entropy, coherence, stabilizer-purity,
/// qfi, holevo (plus a few long-form aliases).
MeasureKind parse_measure(std::string_view name);

enum class Direction { Minimize, Maximize };

struct StabilityConfig {
  double epsilon = std::numeric_limits<double>::min();  // smallest positive normal double
  double lse_temperature = 0.3;

  void validate() const;
};

struct Bipartition {
  Eigen::Index d_a = 0;
  Eigen::Index d_b = 0;
};

/// Which functional is optimized plus whatever context it needs.
struct MeasureSpec {
  MeasureKind kind = MeasureKind::Eof;
  Bipartition bipartition;                       // eof, linear-entropy
  double alpha = 2.0;                            // stabilizer-purity
  std::optional<HermitianMatrix> observable;     // qfi
  std::shared_ptr<const Channel> channel;        // holevo
  StabilityConfig stability;

  static MeasureSpec eof(Eigen::Index d_a, Eigen::Index d_b);
  static MeasureSpec linear_entropy(Eigen::Index d_a, Eigen::Index d_b);
  static MeasureSpec coherence();
  static MeasureSpec stabilizer_purity(double alpha);
  static MeasureSpec qfi(HermitianMatrix observable);
  static MeasureSpec holevo(Channel channel);

  /// Stabilizer purity and Holevo capacity are maximized; the rest minimized.
  Direction direction() const;
  /// Throws InvalidInput when the context does not fit a state of dimension `dim`.
  void validate(Eigen::Index dim) const;
};

struct ObjectiveValue {
  double value = 0.0;
  ComplexMatrix grad;  // d x n, one column per auxiliary state
};

/// x ln x for x > eps, x ln eps otherwise.
double xlnx(double x, double eps = std::numeric_limits<double>::min());
double xlnx_derivative(double x, double eps = std::numeric_limits<double>::min());

/// sum_i (p_i ln p_i - Tr[rho~_i ln rho~_i]),  rho~_i = Tr_B |psi~_i><psi~_i|.
ObjectiveValue eof_objective(const AuxiliaryEnsemble& ens, Bipartition parts, const StabilityConfig& cfg = {});

/// 1 - sum_i Tr[rho~_i^2] / p_i, denominator clamped to eps.
ObjectiveValue linear_entropy_objective(const AuxiliaryEnsemble& ens, Bipartition parts,
                                        const StabilityConfig& cfg = {});

/// 1 - sum_i T log sum_j exp(|<j|psi~_i>|^2 / T): the log-sum-exp smoothed
/// geometric coherence used while optimizing.
ObjectiveValue coherence_objective(const AuxiliaryEnsemble& ens, const StabilityConfig& cfg = {});

/// 1 - sum_i max_j |<j|psi~_i>|^2 with the exact maximum.
double coherence_exact_eval(const AuxiliaryEnsemble& ens);

/// -2^{-n} sum_i p_i^{1-2 alpha} sum_P |<psi~_i|P|psi~_i>|^{2 alpha}, with
/// p_i^{2 alpha - 1} clamped to eps. Minus the value is the ensemble purity.
ObjectiveValue stabilizer_purity_objective(const AuxiliaryEnsemble& ens, double alpha,
                                           const StabilityConfig& cfg = {});

struct StabilizerEntropy {
  double renyi = 0.0;   // log(P) / (1 - alpha)
  double linear = 0.0;  // 1 - P
};

StabilizerEntropy stabilizer_entropy_from_purity(double purity, double alpha);

/// sum_i [<psi~_i|H^2|psi~_i> - <psi~_i|H|psi~_i>^2 / p_i], denominator clamped.
ObjectiveValue qfi_variance_objective(const AuxiliaryEnsemble& ens, const HermitianMatrix& h,
                                      const StabilityConfig& cfg = {});

/// sum_i (p_i ln p_i - Tr[s~_i ln s~_i]),  s~_i = N(|psi~_i><psi~_i|).
ObjectiveValue holevo_objective(const AuxiliaryEnsemble& ens, const Channel& channel,
                                const StabilityConfig& cfg = {});

/// Dispatch on spec.kind (coherence uses the smoothed objective).
ObjectiveValue evaluate_objective(const MeasureSpec& spec, const AuxiliaryEnsemble& ens);

/// -Tr[rho ln rho] in nats.
double von_neumann_entropy(const HermitianMatrix& rho);

}  // namespace cvxroof
