#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cvxroof/types.hpp"

namespace cvxroof {

/// Returns f(x) and writes the gradient into `grad` (already sized).
/// Returning a non-finite value marks x as infeasible; the line search backs off.
using ObjectiveFn = std::function<double(const RealVector& x, RealVector& grad)>;

struct LbfgsOptions {
  double tol = 1e-14;
  double grad_tol = -1.0;  // negative: same as tol
  int max_iterations = 1000;
  int memory = 10;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  int max_line_search = 40;
};

enum class LbfgsExit { GradientTolerance, ObjectiveChange, RoundoffFloor, MaxIterations, LineSearchFailure };

std::string_view to_string(LbfgsExit exit);

struct LbfgsResult {
  RealVector x;
  double value = 0.0;
  int iterations = 0;
  double grad_norm = 0.0;  // max-norm at exit
  bool converged = false;
  LbfgsExit exit = LbfgsExit::MaxIterations;
  std::vector<double> history;  // objective after each accepted step, starting with f(x0)
};

/// Limited-memory BFGS with a strong-Wolfe line search (bracketing and cubic
/// zoom). Stops when |f_k - f_{k-1}| <= tol * max(1, |f_k|), when the gradient
/// max-norm drops to grad_tol (default: tol), or after max_iterations. A line search that
/// cannot leave the round-off band around f counts as converged; any other
/// line-search failure returns the best point with converged = false.
LbfgsResult lbfgs_minimize(const ObjectiveFn& f, RealVector x0, const LbfgsOptions& options = {});

}  // namespace cvxroof
