#pragma once

// Command-line front end. The subcommands are thin wrappers around the
// functions below, which the acceptance suite also calls directly.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvxroof/io.hpp"
#include "cvxroof/manifold.hpp"
#include "cvxroof/measures.hpp"
#include "cvxroof/solver.hpp"

namespace cvxroof::cli {

inline constexpr std::string_view kVersion = "0.1.0";

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

/// Entry point used by main(); writes results to `out` and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// Run records

/// Everything a solve depends on.
struct SolveInputs {
  DensityMatrix rho;
  MeasureSpec spec;
  SolverConfig config;
  io::json input;  // where the state and operators came from
};

/// RunRecord: input descriptor, measure echo, solver configuration with the
/// ensemble size resolved, result fields, software version and UTC timestamp.
io::json make_run_record(const SolveInputs& inputs, const SolveResult& result);

/// Rebuilds the state, measure and configuration embedded in a RunRecord, so
/// solve() on the returned inputs repeats the recorded run.
SolveInputs inputs_from_record(const io::json& record);

// ---------------------------------------------------------------------------
// Sweeps

struct SweepRow {
  std::vector<double> inputs;   // columns named by SweepTable::input_names
  double value = 0.0;
  std::optional<double> oracle;
  int iterations = 0;
  bool converged = false;
  double reconstruction_residual = 0.0;

  std::optional<double> abs_error() const;
};

struct SweepTable {
  std::vector<std::string> input_names;
  std::vector<SweepRow> rows;

  /// Comma-separated, one header row, empty cells for missing oracles.
  void write_csv(std::ostream& os) const;
};

/// Werner states of local dimension d at each alpha. The oracle is 0 in the
/// PPT region and the Wootters value for d = 2.
SweepTable sweep_werner(Eigen::Index d, const std::vector<double>& alphas, const SolverConfig& config);

/// Noisy coherent states for each (d, p) against the closed-form coherence.
SweepTable sweep_coherent(const std::vector<Eigen::Index>& dims, const std::vector<double>& ps,
                          const SolverConfig& config);

/// Planes through the Bloch ball for the qubit stabilizer sweep.
enum class BlochPlane { XY, XZ, YZ, Face };
BlochPlane parse_plane(std::string_view name);
std::string_view to_string(BlochPlane plane);

/// `grid` x `grid` points of the plane clipped to the Bloch ball, solved for
/// the linear stabilizer entropy (alpha = 2). The oracle is 0 inside the
/// stabilizer octahedron |x| + |y| + |z| <= 1 and absent outside it.
SweepTable sweep_bloch_section(BlochPlane plane, int grid, const SolverConfig& config);

/// |x| + |y| + |z| <= 1 + slack.
bool in_octahedron(double x, double y, double z, double slack = 1e-12);

// ---------------------------------------------------------------------------
// Gradient audit

struct GradcheckPoint {
  TrivializationKind trivialization = TrivializationKind::Polar;
  int index = 0;
  double relative_error = 0.0;
  double gradient_norm = 0.0;
};

struct GradcheckOptions {
  MeasureKind measure = MeasureKind::Eof;
  Eigen::Index dim = 4;
  std::optional<Eigen::Index> ensemble_size;  // defaults to 2d
  std::uint64_t seed = 0;
  int points = 20;
  std::vector<TrivializationKind> trivializations{TrivializationKind::Polar, TrivializationKind::MatrixExp,
                                                  TrivializationKind::EulerHurwitz};
  /// Use the identity as the QFI generator: the objective is then constant
  /// and the analytic gradient must vanish.
  bool constant_probe = false;
  double threshold = 1e-5;
};

struct GradcheckReport {
  std::vector<GradcheckPoint> points;
  double max_relative_error = 0.0;
  bool passed = true;
};

/// Five-point central differences of the full objective (trivialization, ensemble
/// map and measure) at random states and parameters. The relative error is
/// ||g - g_fd|| / max(||g||, ||g_fd||, 1e-4); the floor keeps finite-difference
/// round-off from dominating when the true gradient vanishes.
GradcheckReport gradient_check(const GradcheckOptions& options);

/// Factors used for bipartite measures when none are given: the smallest
/// prime factor times the rest. Throws for prime dimensions.
Bipartition default_bipartition(Eigen::Index dim);

// ---------------------------------------------------------------------------
// Oracle comparison

struct OracleRow {
  std::string label;
  double value = 0.0;
  double oracle = 0.0;
  bool converged = false;
  double reconstruction_residual = 0.0;
};

struct OracleReport {
  std::string suite;
  std::vector<OracleRow> rows;
  double max_abs_deviation = 0.0;
  double mean_abs_deviation = 0.0;
  /// Solver values below the exact value by more than 1e-9: a convex roof
  /// search can only approach the optimum from the feasible side.
  int violations = 0;
  double tolerance = 0.0;
  bool passed = true;
};

/// Suites: eof-2qubit (Wootters), qfi (SLD formula, qubits and qutrits),
/// coherence (closed form), magic-octahedron (vertices and interior points).
OracleReport oracle_compare(std::string_view suite, int trials, std::uint64_t seed, const SolverConfig& config = {});

}  // namespace cvxroof::cli
