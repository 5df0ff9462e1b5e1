// Sweeps, the finite-difference gradient audit and oracle comparisons.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>

#include "cvxroof/catalog.hpp"
#include "cvxroof/cli.hpp"
#include "cvxroof/random.hpp"

namespace cvxroof::cli {

namespace {

constexpr double kViolationSlack = 1e-9;
constexpr double kGradientFloor = 1e-4;

SweepRow make_row(std::vector<double> inputs, const SolveResult& r, std::optional<double> oracle) {
  SweepRow row;
  row.inputs = std::move(inputs);
  row.value = r.value;
  row.oracle = oracle;
  row.iterations = r.restarts[r.best_restart].iterations;
  row.converged = r.converged;
  row.reconstruction_residual = r.reconstruction_residual;
  return row;
}

std::vector<Eigen::Index> split_factors(const Bipartition& b) { return {b.d_a, b.d_b}; }

}  // namespace

// ---------------------------------------------------------------------------
// Sweeps

std::optional<double> SweepRow::abs_error() const {
  if (!oracle) return std::nullopt;
  return std::abs(value - *oracle);
}

void SweepTable::write_csv(std::ostream& os) const {
  const auto old_precision = os.precision(17);
  for (const auto& name : input_names) os << name << ',';
  os << "value,oracle,abs_error,iterations,converged,reconstruction_residual\n";
  for (const auto& row : rows) {
    for (const double v : row.inputs) os << v << ',';
    os << row.value << ',';
    if (row.oracle) os << *row.oracle;
    os << ',';
    if (const auto e = row.abs_error()) os << *e;
    os << ',' << row.iterations << ',' << (row.converged ? 1 : 0) << ',' << row.reconstruction_residual << '\n';
  }
  os.precision(old_precision);
}

SweepTable sweep_werner(Eigen::Index d, const std::vector<double>& alphas, const SolverConfig& config) {
  SweepTable table{{"d", "alpha"}, {}};
  const MeasureSpec spec = MeasureSpec::eof(d, d);
  for (const double alpha : alphas) {
    const DensityMatrix rho = werner(d, alpha);
    std::optional<double> oracle;
    if (ppt_check(rho, d, d)) {
      oracle = 0.0;  // PPT is exact for Werner states
    } else if (d == 2) {
      oracle = wootters_eof_oracle(rho);
    }
    table.rows.push_back(make_row({double(d), alpha}, solve(rho, spec, config), oracle));
  }
  return table;
}

SweepTable sweep_coherent(const std::vector<Eigen::Index>& dims, const std::vector<double>& ps,
                          const SolverConfig& config) {
  SweepTable table{{"d", "p"}, {}};
  const MeasureSpec spec = MeasureSpec::coherence();
  for (const Eigen::Index d : dims) {
    for (const double p : ps) {
      table.rows.push_back(
          make_row({double(d), p}, solve(noisy_coherent(d, p), spec, config), coherence_analytic(d, p)));
    }
  }
  return table;
}

BlochPlane parse_plane(std::string_view name) {
  if (name == "xy") return BlochPlane::XY;
  if (name == "xz") return BlochPlane::XZ;
  if (name == "yz") return BlochPlane::YZ;
  if (name == "face") return BlochPlane::Face;
  throw InvalidInput("unknown plane '" + std::string(name) + "' (expected xy, xz, yz or face)");
}

std::string_view to_string(BlochPlane plane) {
  switch (plane) {
    case BlochPlane::XY:
      return "xy";
    case BlochPlane::XZ:
      return "xz";
    case BlochPlane::YZ:
      return "yz";
    case BlochPlane::Face:
      return "face";
  }
  return "?";
}

bool in_octahedron(double x, double y, double z, double slack) {
  return std::abs(x) + std::abs(y) + std::abs(z) <= 1.0 + slack;
}

SweepTable sweep_bloch_section(BlochPlane plane, int grid, const SolverConfig& config) {
  if (grid < 2) throw InvalidInput("bloch-section: grid must have at least 2 points per axis");
  // Plane = origin + u e1 + v e2 with orthonormal e1, e2.
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
  Eigen::Vector3d e1;
  Eigen::Vector3d e2;
  double half_width = 1.0;
  switch (plane) {
    case BlochPlane::XY:
      e1 = Eigen::Vector3d::UnitX();
      e2 = Eigen::Vector3d::UnitY();
      break;
    case BlochPlane::XZ:
      e1 = Eigen::Vector3d::UnitX();
      e2 = Eigen::Vector3d::UnitZ();
      break;
    case BlochPlane::YZ:
      e1 = Eigen::Vector3d::UnitY();
      e2 = Eigen::Vector3d::UnitZ();
      break;
    case BlochPlane::Face:
      // The plane x + y + z = 1 containing one octahedron face.
      origin = Eigen::Vector3d::Constant(1.0 / 3.0);
      e1 = Eigen::Vector3d(1.0, -1.0, 0.0).normalized();
      e2 = Eigen::Vector3d(1.0, 1.0, -2.0).normalized();
      half_width = std::sqrt(2.0 / 3.0);
      break;
  }

  SweepTable table{{"u", "v", "x", "y", "z"}, {}};
  const MeasureSpec spec = MeasureSpec::stabilizer_purity(2.0);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double u = -half_width + 2.0 * half_width * i / (grid - 1);
      const double v = -half_width + 2.0 * half_width * j / (grid - 1);
      Eigen::Vector3d r = origin + u * e1 + v * e2;
      const double norm = r.norm();
      if (norm > 1.0 + 1e-12) continue;
      if (norm > 1.0) r /= norm;
      const std::optional<double> oracle =
          in_octahedron(r.x(), r.y(), r.z()) ? std::optional<double>(0.0) : std::nullopt;
      table.rows.push_back(
          make_row({u, v, r.x(), r.y(), r.z()}, solve(bloch_qubit(r.x(), r.y(), r.z()), spec, config), oracle));
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Gradient audit

Bipartition default_bipartition(Eigen::Index dim) {
  for (Eigen::Index f = 2; f * f <= dim; ++f) {
    if (dim % f == 0) return {f, dim / f};
  }
  throw InvalidInput("dimension " + std::to_string(dim) + " has no nontrivial bipartition");
}

GradcheckReport gradient_check(const GradcheckOptions& opt) {
  if (opt.points < 1) throw InvalidInput("gradcheck: need at least one point");
  if (opt.dim < 2) throw InvalidInput("gradcheck: dimension must be at least 2");
  if (opt.constant_probe && opt.measure != MeasureKind::QfiVariance) {
    throw InvalidInput("gradcheck: the constant probe uses the qfi measure");
  }
  const Eigen::Index d = opt.dim;
  const Eigen::Index n = opt.ensemble_size.value_or(2 * d);

  GradcheckReport report;
  for (int k = 0; k < opt.points; ++k) {
    const std::uint64_t point_seed = opt.seed + std::uint64_t(k);
    Rng rng(point_seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<Eigen::Index> dims{d};
    MeasureSpec spec;
    switch (opt.measure) {
      case MeasureKind::Eof:
      case MeasureKind::LinearEntropy: {
        const Bipartition b = default_bipartition(d);
        dims = split_factors(b);
        spec = opt.measure == MeasureKind::Eof ? MeasureSpec::eof(b.d_a, b.d_b)
                                               : MeasureSpec::linear_entropy(b.d_a, b.d_b);
        break;
      }
      case MeasureKind::GeometricCoherence:
        spec = MeasureSpec::coherence();
        break;
      case MeasureKind::StabilizerPurity:
        spec = MeasureSpec::stabilizer_purity(2.0);
        break;
      case MeasureKind::QfiVariance:
        spec = MeasureSpec::qfi(opt.constant_probe ? HermitianMatrix::identity(d)
                                                   : HermitianMatrix(random_hermitian(rng, d)));
        break;
      case MeasureKind::Holevo:
        spec = MeasureSpec::holevo(random_channel(d, d, 3, point_seed));
        break;
    }
    const DensityMatrix rho = haar_random_state(dims, d, point_seed);

    for (const TrivializationKind kind : opt.trivializations) {
      ConvexRoofObjective objective(rho, spec, kind, n);
      RealVector x = initial_parameters(kind, n, d, rng);
      RealVector grad(x.size());
      objective(x, grad);

      RealVector fd(x.size());
      RealVector scratch(x.size());
      // Five-point central stencil. A step of 1e-4 balances truncation
      // (O(h^4)) against round-off in objectives that sum many terms.
      for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double xj = x(j);
        const double h = 1e-4 * std::max(1.0, std::abs(xj));
        auto at = [&](double dx) {
          x(j) = xj + dx;
          const double v = objective(x, scratch);
          x(j) = xj;
          return v;
        };
        fd(j) = (at(-2.0 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2.0 * h)) / (12.0 * h);
      }

      // Finite differences carry round-off, so the denominator is floored:
      // a vanishing gradient is compared absolutely.
      const double scale = std::max({grad.norm(), fd.norm(), kGradientFloor});
      const double diff = (grad - fd).norm();
      GradcheckPoint point;
      point.trivialization = kind;
      point.index = k;
      point.gradient_norm = grad.norm();
      point.relative_error = diff / scale;
      report.max_relative_error = std::max(report.max_relative_error, point.relative_error);
      if (!(point.relative_error <= opt.threshold)) report.passed = false;
      report.points.push_back(point);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Oracle comparison

OracleReport oracle_compare(std::string_view suite, int trials, std::uint64_t seed, const SolverConfig& config) {
  if (trials < 0) throw InvalidInput("oracle-compare: trials must be non-negative");
  OracleReport report;
  report.suite = std::string(suite);

  auto add = [&](std::string label, const SolveResult& r, double oracle) {
    report.rows.push_back({std::move(label), r.value, oracle, r.converged, r.reconstruction_residual});
  };

  if (suite == "eof-2qubit") {
    report.tolerance = 1e-6;
    for (int t = 0; t < trials; ++t) {
      const Eigen::Index rank = 1 + t % 4;
      const DensityMatrix rho = haar_random_state({2, 2}, rank, seed + std::uint64_t(t));
      SolverConfig cfg = config;
      cfg.seed = seed + std::uint64_t(t);
      add("rank=" + std::to_string(rank), solve(rho, MeasureSpec::eof(2, 2), cfg), wootters_eof_oracle(rho));
    }
  } else if (suite == "qfi") {
    report.tolerance = 1e-6;
    for (int t = 0; t < trials; ++t) {
      const Eigen::Index d = t % 2 == 0 ? 2 : 3;
      const DensityMatrix rho = haar_random_state({d}, d, seed + std::uint64_t(t));
      Rng rng(seed + std::uint64_t(t) + 0x51ed270b27ULL);
      const HermitianMatrix h(random_hermitian(rng, d));
      SolverConfig cfg = config;
      cfg.seed = seed + std::uint64_t(t);
      add("d=" + std::to_string(d), solve(rho, MeasureSpec::qfi(h), cfg), qfi_sld_oracle(rho, h));
    }
  } else if (suite == "coherence") {
    report.tolerance = 1e-8;
    constexpr std::array<Eigen::Index, 5> dims{2, 4, 8, 16, 32};
    for (int t = 0; t < trials; ++t) {
      const Eigen::Index d = dims[std::size_t(t) % dims.size()];
      Rng rng(seed + std::uint64_t(t));
      const double p = 1.0 - rng.uniform();  // (0, 1]
      SolverConfig cfg = config;
      cfg.seed = seed + std::uint64_t(t);
      add("d=" + std::to_string(d) + " p=" + std::to_string(p), solve(noisy_coherent(d, p), MeasureSpec::coherence(), cfg),
          coherence_analytic(d, p));
    }
  } else if (suite == "magic-octahedron") {
    report.tolerance = 1e-9;
    const MeasureSpec spec = MeasureSpec::stabilizer_purity(2.0);
    const std::array<Eigen::Vector3d, 6> vertices{Eigen::Vector3d(1, 0, 0),  Eigen::Vector3d(-1, 0, 0),
                                                  Eigen::Vector3d(0, 1, 0),  Eigen::Vector3d(0, -1, 0),
                                                  Eigen::Vector3d(0, 0, 1),  Eigen::Vector3d(0, 0, -1)};
    SolverConfig cfg = config;
    cfg.seed = seed;
    for (const auto& v : vertices) {
      add("vertex", solve(bloch_qubit(v.x(), v.y(), v.z()), spec, cfg), 0.0);
    }
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
      Eigen::Vector3d r;
      do {
        r = Eigen::Vector3d(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
      } while (!in_octahedron(r.x(), r.y(), r.z(), 0.0));
      cfg.seed = seed + std::uint64_t(t) + 1;
      add("interior", solve(bloch_qubit(r.x(), r.y(), r.z()), spec, cfg), 0.0);
    }
  } else {
    throw InvalidInput("unknown suite '" + std::string(suite) +
                       "' (expected eof-2qubit, qfi, coherence or magic-octahedron)");
  }

  double sum = 0.0;
  for (const auto& row : report.rows) {
    const double dev = std::abs(row.value - row.oracle);
    report.max_abs_deviation = std::max(report.max_abs_deviation, dev);
    sum += dev;
    if (row.value < row.oracle - kViolationSlack) ++report.violations;
  }
  if (!report.rows.empty()) report.mean_abs_deviation = sum / double(report.rows.size());
  report.passed = report.violations == 0 && report.max_abs_deviation <= report.tolerance;
  return report;
}

}  // namespace cvxroof::cli
