#include "cvxroof/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace cvxroof {

namespace {

constexpr double kRoundoffBand = 1e-12;

struct Trial {
  double step = 0.0;
  double value = 0.0;
  double slope = 0.0;  // directional derivative
  RealVector x;
  RealVector grad;
};

double cubic_minimizer(const Trial& a, const Trial& b) {
  const double lo = std::min(a.step, b.step);
  const double hi = std::max(a.step, b.step);
  const double width = hi - lo;
  const double d1 = a.slope + b.slope - 3.0 * (a.value - b.value) / (a.step - b.step);
  const double disc = d1 * d1 - a.slope * b.slope;
  double step = 0.5 * (lo + hi);
  if (disc >= 0.0 && std::isfinite(disc) && std::isfinite(a.value) && std::isfinite(b.value)) {
    const double d2 = std::copysign(std::sqrt(disc), b.step - a.step);
    const double denom = b.slope - a.slope + 2.0 * d2;
    if (denom != 0.0) {
      const double candidate = b.step - (b.step - a.step) * (b.slope + d2 - d1) / denom;
      if (std::isfinite(candidate)) step = candidate;
    }
  }
  return std::clamp(step, lo + 0.1 * width, hi - 0.1 * width);
}

class LineSearch {
 public:
  LineSearch(const ObjectiveFn& f, const LbfgsOptions& opt, const RealVector& x0, double f0, const RealVector& dir,
             double slope0)
      : f_(f), opt_(opt), x0_(x0), f0_(f0), dir_(dir), slope0_(slope0) {}

  // Returns true with `out` set to an accepted point (Armijo always holds;
  // strong Wolfe unless the zoom interval collapsed).
  bool run(double initial_step, Trial& out) {
    Trial prev{0.0, f0_, slope0_, x0_, {}};
    double step = initial_step;
    for (int i = 0; i < opt_.max_line_search; ++i) {
      Trial cur = evaluate(step);
      if (!std::isfinite(cur.value) || cur.value > f0_ + opt_.wolfe_c1 * step * slope0_ ||
          (i > 0 && cur.value >= prev.value)) {
        return zoom(prev, cur, out);
      }
      if (std::abs(cur.slope) <= -opt_.wolfe_c2 * slope0_) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope >= 0.0) return zoom(cur, prev, out);
      prev = std::move(cur);
      step *= 2.0;
    }
    if (prev.step > 0.0) {
      out = std::move(prev);
      return true;
    }
    return false;
  }

  bool left_roundoff_band() const { return left_band_; }

 private:
  Trial evaluate(double step) {
    Trial t;
    t.step = step;
    t.x = x0_ + step * dir_;
    t.grad.resize(t.x.size());
    t.value = f_(t.x, t.grad);
    if (std::isfinite(t.value) && t.grad.allFinite()) {
      t.slope = t.grad.dot(dir_);
      if (std::abs(t.value - f0_) > kRoundoffBand * std::max(1.0, std::abs(f0_))) left_band_ = true;
    } else {
      t.value = std::numeric_limits<double>::infinity();
      t.slope = std::numeric_limits<double>::infinity();
    }
    return t;
  }

  bool zoom(Trial lo, Trial hi, Trial& out) {
    for (int i = 0; i < opt_.max_line_search; ++i) {
      if (std::abs(hi.step - lo.step) <= 1e-16 * std::max(1.0, std::abs(lo.step))) break;
      const double step = std::isfinite(hi.value) ? cubic_minimizer(lo, hi) : 0.5 * (lo.step + hi.step);
      Trial cur = evaluate(step);
      if (!std::isfinite(cur.value) || cur.value > f0_ + opt_.wolfe_c1 * step * slope0_ || cur.value >= lo.value) {
        hi = std::move(cur);
        continue;
      }
      if (std::abs(cur.slope) <= -opt_.wolfe_c2 * slope0_) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope * (hi.step - lo.step) >= 0.0) hi = std::move(lo);
      lo = std::move(cur);
    }
    if (lo.step > 0.0 && lo.value < f0_) {
      out = std::move(lo);
      return true;
    }
    return false;
  }

  const ObjectiveFn& f_;
  const LbfgsOptions& opt_;
  const RealVector& x0_;
  double f0_;
  const RealVector& dir_;
  double slope0_;
  bool left_band_ = false;
};

}  // namespace

std::string_view to_string(LbfgsExit exit) {
  switch (exit) {
    case LbfgsExit::GradientTolerance:
      return "gradient-tolerance";
    case LbfgsExit::ObjectiveChange:
      return "objective-change";
    case LbfgsExit::RoundoffFloor:
      return "roundoff-floor";
    case LbfgsExit::MaxIterations:
      return "max-iterations";
    case LbfgsExit::LineSearchFailure:
      return "line-search-failure";
  }
  return "?";
}

LbfgsResult lbfgs_minimize(const ObjectiveFn& f, RealVector x0, const LbfgsOptions& opt) {
  if (!(opt.tol > 0.0) || opt.memory < 1 || opt.max_iterations < 0) throw InvalidInput("invalid L-BFGS options");
  LbfgsResult res;
  res.x = std::move(x0);
  RealVector grad(res.x.size());
  res.value = f(res.x, grad);
  if (!std::isfinite(res.value) || !grad.allFinite()) {
    throw SolverFailure("L-BFGS: objective or gradient is not finite at the initial point");
  }
  res.history.push_back(res.value);
  const double grad_tol = opt.grad_tol >= 0.0 ? opt.grad_tol : opt.tol;

  std::deque<RealVector> s_hist;
  std::deque<RealVector> y_hist;
  std::deque<double> rho_hist;
  std::vector<double> alpha(std::size_t(opt.memory));

  auto finish = [&](LbfgsExit exit, bool converged) {
    res.exit = exit;
    res.converged = converged;
    res.grad_norm = grad.size() ? grad.lpNorm<Eigen::Infinity>() : 0.0;
    return res;
  };

  bool fresh = true;  // no curvature information yet
  while (true) {
    if (grad.size() == 0 || grad.lpNorm<Eigen::Infinity>() <= grad_tol) return finish(LbfgsExit::GradientTolerance, true);
    if (res.iterations >= opt.max_iterations) return finish(LbfgsExit::MaxIterations, false);

    // Two-loop recursion for d = -H g.
    RealVector dir = -grad;
    const std::size_t m = s_hist.size();
    for (std::size_t k = m; k-- > 0;) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(dir);
      dir -= alpha[k] * y_hist[k];
    }
    if (m > 0) dir *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * y_hist[k].dot(dir);
      dir += (alpha[k] - beta) * s_hist[k];
    }
    double slope = grad.dot(dir);
    if (!(slope < 0.0)) {
      dir = -grad;
      slope = -grad.squaredNorm();
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      fresh = true;
    }
    const double initial_step = fresh ? std::min(1.0, 1.0 / grad.lpNorm<1>()) : 1.0;

    LineSearch search(f, opt, res.x, res.value, dir, slope);
    Trial accepted;
    if (!search.run(initial_step, accepted)) {
      if (!fresh) {
        // Stale curvature pairs can produce a poor direction; retry once from
        // steepest descent before giving up.
        s_hist.clear();
        y_hist.clear();
        rho_hist.clear();
        fresh = true;
        continue;
      }
      if (!search.left_roundoff_band()) return finish(LbfgsExit::RoundoffFloor, true);
      return finish(LbfgsExit::LineSearchFailure, false);
    }

    RealVector s = accepted.x - res.x;
    RealVector y = accepted.grad - grad;
    const double previous = res.value;
    res.x = std::move(accepted.x);
    grad = std::move(accepted.grad);
    res.value = accepted.value;
    ++res.iterations;
    res.history.push_back(res.value);

    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      if (int(s_hist.size()) == opt.memory) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      rho_hist.push_back(1.0 / sy);
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      fresh = false;
    }

    if (std::abs(res.value - previous) <= opt.tol * std::max(1.0, std::abs(res.value))) {
      return finish(LbfgsExit::ObjectiveChange, true);
    }
  }
}

}  // namespace cvxroof
