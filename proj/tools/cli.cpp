// Subcommand parsing and RunRecord serialization.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cvxroof/catalog.hpp"
#include "cvxroof/cli.hpp"

namespace cvxroof::cli {

namespace {

using io::json;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json vector_to_json(const RealVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Bipartition parse_factors(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw InvalidInput("--factors expects dAxdB, got '" + text + "'");
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const std::string a = text.substr(0, x);
    const std::string b = text.substr(x + 1);
    const long long d_a = std::stoll(a, &used_a);
    const long long d_b = std::stoll(b, &used_b);
    if (used_a != a.size() || used_b != b.size() || d_a < 1 || d_b < 1) throw std::invalid_argument(text);
    return {Eigen::Index(d_a), Eigen::Index(d_b)};
  } catch (const std::logic_error&) {
    throw InvalidInput("--factors expects dAxdB with positive integers, got '" + text + "'");
  }
}

std::optional<Eigen::Index> parse_ensemble_size(const std::string& text) {
  if (text == "2d") return std::nullopt;
  try {
    std::size_t used = 0;
    const long long n = std::stoll(text, &used);
    if (used != text.size() || n < 1) throw std::invalid_argument(text);
    return Eigen::Index(n);
  } catch (const std::logic_error&) {
    throw InvalidInput("--n expects a positive integer or \"2d\", got '" + text + "'");
  }
}

/// "lo:hi:count" (inclusive linspace) or a comma-separated list.
std::vector<double> parse_grid(const std::string& text, const char* flag) {
  std::vector<double> out;
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::logic_error&) {
      throw InvalidInput(std::string(flag) + ": cannot parse '" + s + "'");
    }
  };
  if (std::count(text.begin(), text.end(), ':') == 2) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    const double lo = number(text.substr(0, c1));
    const double hi = number(text.substr(c1 + 1, c2 - c1 - 1));
    const double count = number(text.substr(c2 + 1));
    if (count < 1 || count != std::floor(count)) throw InvalidInput(std::string(flag) + ": count must be a positive integer");
    const int k = int(count);
    for (int i = 0; i < k; ++i) out.push_back(k == 1 ? lo : lo + (hi - lo) * i / (k - 1));
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(number(item));
  }
  if (out.empty()) throw InvalidInput(std::string(flag) + ": empty grid");
  return out;
}

/// Flags shared by everything that runs the solver.
struct SolverFlags {
  std::string n = "2d";
  int restarts = 3;
  double tol = 1e-14;
  int max_iterations = 1000;
  std::string trivialization = "polar";
  std::uint64_t seed = 0;

  void attach(CLI::App* app) {
    app->add_option("--n", n, "Ensemble size: a positive integer or \"2d\"")->capture_default_str();
    app->add_option("--restarts", restarts, "Number of random restarts")->capture_default_str();
    app->add_option("--tol", tol, "L-BFGS tolerance (objective change and gradient max-norm)")->capture_default_str();
    app->add_option("--max-iterations", max_iterations, "L-BFGS iteration cap per restart")->capture_default_str();
    app->add_option("--trivialization", trivialization, "polar, exp or euler")->capture_default_str();
    app->add_option("--seed", seed, "Seed of the first restart")->capture_default_str();
  }

  SolverConfig config() const {
    SolverConfig c;
    c.ensemble_size = parse_ensemble_size(n);
    c.restarts = restarts;
    c.tol = tol;
    c.max_iterations = max_iterations;
    c.trivialization = parse_trivialization(trivialization);
    c.seed = seed;
    return c;
  }
};

void emit_json(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << j.dump(2) << '\n';
  } else {
    io::write_json(path, j);
  }
}

template <typename Table>
void emit_csv(const Table& table, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    table.write_csv(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw InvalidInput("cannot write '" + path + "'");
  table.write_csv(file);
}

}  // namespace

// ---------------------------------------------------------------------------
// Run records

io::json make_run_record(const SolveInputs& in, const SolveResult& r) {
  json measure;
  measure["kind"] = std::string(to_string(in.spec.kind));
  if (in.spec.kind == MeasureKind::Eof || in.spec.kind == MeasureKind::LinearEntropy) {
    measure["factors"] = {in.spec.bipartition.d_a, in.spec.bipartition.d_b};
  }
  if (in.spec.kind == MeasureKind::StabilizerPurity) measure["alpha"] = in.spec.alpha;
  if (in.spec.observable) measure["hamiltonian"] = io::operator_to_json(*in.spec.observable);
  if (in.spec.channel) measure["channel"] = io::channel_to_json(*in.spec.channel);
  measure["lse_temperature"] = in.config.lse_temperature;
  measure["epsilon"] = in.config.epsilon;

  const SolverConfig& c = in.config;
  json config;
  config["n"] = c.resolved_ensemble_size(in.rho.dim());
  config["restarts"] = c.restarts;
  config["tol"] = c.tol;
  config["grad_tol"] = c.grad_tol >= 0.0 ? c.grad_tol : c.tol;
  config["max_iterations"] = c.max_iterations;
  config["memory"] = c.memory;
  config["trivialization"] = std::string(to_string(c.trivialization));
  config["seed"] = c.seed;

  json result;
  result["value"] = r.value;
  result["raw_objective"] = r.raw_objective;
  result["converged"] = r.converged;
  result["best_restart"] = r.best_restart;
  result["gradient_norm"] = r.gradient_norm;
  result["reconstruction_residual"] = r.reconstruction_residual;
  result["wall_time"] = r.wall_time;
  result["extras"] = r.extras;
  result["probabilities"] = vector_to_json(r.ensemble.probabilities());
  result["ensemble"] = io::matrix_to_json(r.ensemble.states);
  result["parameters"] = vector_to_json(r.parameters);
  result["restarts"] = json::array();
  for (const auto& t : r.restarts) {
    result["restarts"].push_back({{"seed", t.seed},
                                  {"value", t.value},
                                  {"raw_objective", t.raw_objective},
                                  {"iterations", t.iterations},
                                  {"gradient_norm", t.grad_norm},
                                  {"converged", t.converged},
                                  {"exit", t.exit},
                                  {"redraws", t.redraws}});
  }

  json input = in.input;
  input["state"] = io::state_to_json(in.rho);

  return {{"software", {{"name", "cvxroof"}, {"version", std::string(kVersion)}}},
          {"timestamp", utc_timestamp()},
          {"input", input},
          {"measure", measure},
          {"config", config},
          {"result", result}};
}

SolveInputs inputs_from_record(const io::json& record) {
  try {
    const json& input = record.at("input");
    const json& m = record.at("measure");
    const json& c = record.at("config");

    DensityMatrix rho = io::state_from_json(input.at("state"));
    const MeasureKind kind = parse_measure(m.at("kind").get<std::string>());
    MeasureSpec spec;
    switch (kind) {
      case MeasureKind::Eof:
      case MeasureKind::LinearEntropy: {
        const auto f = m.at("factors").get<std::vector<Eigen::Index>>();
        if (f.size() != 2) throw InvalidInput("record: measure factors must have two entries");
        spec = kind == MeasureKind::Eof ? MeasureSpec::eof(f[0], f[1]) : MeasureSpec::linear_entropy(f[0], f[1]);
        break;
      }
      case MeasureKind::GeometricCoherence:
        spec = MeasureSpec::coherence();
        break;
      case MeasureKind::StabilizerPurity:
        spec = MeasureSpec::stabilizer_purity(m.at("alpha").get<double>());
        break;
      case MeasureKind::QfiVariance:
        spec = MeasureSpec::qfi(io::operator_from_json(m.at("hamiltonian")));
        break;
      case MeasureKind::Holevo:
        spec = MeasureSpec::holevo(io::channel_from_json(m.at("channel")));
        break;
    }

    SolverConfig config;
    config.ensemble_size = c.at("n").get<Eigen::Index>();
    config.restarts = c.at("restarts").get<int>();
    config.tol = c.at("tol").get<double>();
    config.grad_tol = c.at("grad_tol").get<double>();
    config.max_iterations = c.at("max_iterations").get<int>();
    config.memory = c.at("memory").get<int>();
    config.trivialization = parse_trivialization(c.at("trivialization").get<std::string>());
    config.seed = c.at("seed").get<std::uint64_t>();
    config.lse_temperature = m.at("lse_temperature").get<double>();
    config.epsilon = m.at("epsilon").get<double>();

    json descriptor = input;
    descriptor.erase("state");
    return {std::move(rho), std::move(spec), config, descriptor};
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed run record: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Command line

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convex roof resource measures by Stiefel-manifold L-BFGS", "cvxroof"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "Solve one state and write a RunRecord (JSON)");
  std::string measure_name;
  std::string state_path;
  std::string factors_text;
  double alpha = 2.0;
  std::string hamiltonian_path;
  std::string channel_path;
  std::string out_path;
  SolverFlags solve_flags;
  solve_cmd->add_option("--measure", measure_name, "eof, linear-entropy, coherence, stabilizer-purity, qfi or holevo")
      ->required();
  solve_cmd->add_option("--state", state_path, "State file")->required();
  solve_cmd->add_option("--factors", factors_text, "Bipartition dAxdB for eof and linear-entropy");
  solve_cmd->add_option("--alpha", alpha, "Renyi order for stabilizer-purity (>= 2)")->capture_default_str();
  solve_cmd->add_option("--hamiltonian", hamiltonian_path, "Generator file for qfi");
  solve_cmd->add_option("--channel", channel_path, "Kraus channel file for holevo");
  solve_cmd->add_option("--out", out_path, "RunRecord destination (default: stdout)");
  solve_flags.attach(solve_cmd);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Solve a grid of benchmark states and write a CSV table");
  sweep_cmd->require_subcommand(1);
  sweep_cmd->footer(
      "Columns: the grid inputs (werner: d,alpha; coherent: d,p; bloch-section: u,v,x,y,z), then\n"
      "value,oracle,abs_error,iterations,converged,reconstruction_residual. Empty oracle cells mean\n"
      "no reference value is available at that point.");
  SolverFlags sweep_flags;
  std::string sweep_out;

  auto* werner_cmd = sweep_cmd->add_subcommand("werner", "EoF of Werner states over a grid of alpha");
  long long werner_d = 2;
  std::string alphas_text = "-1:1:21";
  werner_cmd->add_option("--d", werner_d, "Local dimension")->capture_default_str();
  werner_cmd->add_option("--alphas", alphas_text, "lo:hi:count or a comma-separated list")->capture_default_str();

  auto* coherent_cmd = sweep_cmd->add_subcommand("coherent", "Geometric coherence of noisy coherent states");
  std::string dims_text = "2,4,8,16,32";
  std::string ps_text = "0:1:11";
  coherent_cmd->add_option("--d", dims_text, "Comma-separated dimensions")->capture_default_str();
  coherent_cmd->add_option("--p", ps_text, "lo:hi:count or a comma-separated list")->capture_default_str();

  auto* bloch_cmd = sweep_cmd->add_subcommand("bloch-section", "Linear stabilizer entropy over a Bloch-ball plane");
  std::string plane_text = "face";
  int grid = 11;
  bloch_cmd->add_option("--plane", plane_text, "xy, xz, yz or face (the plane x + y + z = 1)")->capture_default_str();
  bloch_cmd->add_option("--grid", grid, "Points per axis")->capture_default_str();

  for (auto* sub : {werner_cmd, coherent_cmd, bloch_cmd}) {
    sweep_flags.attach(sub);
    sub->add_option("--out", sweep_out, "CSV destination (default: stdout)");
  }

  // gradcheck
  auto* grad_cmd = app.add_subcommand("gradcheck", "Compare analytic gradients with central finite differences");
  std::string grad_measure;
  long long grad_d = 4;
  std::uint64_t grad_seed = 0;
  int grad_points = 20;
  std::string grad_triv = "all";
  std::string grad_n = "2d";
  bool constant_probe = false;
  grad_cmd->add_option("--measure", grad_measure, "Measure to audit")->required();
  grad_cmd->add_option("--d", grad_d, "State dimension")->capture_default_str();
  grad_cmd->add_option("--seed", grad_seed, "Seed")->capture_default_str();
  grad_cmd->add_option("--points", grad_points, "Random points per trivialization")->capture_default_str();
  grad_cmd->add_option("--trivialization", grad_triv, "polar, exp, euler or all")->capture_default_str();
  grad_cmd->add_option("--n", grad_n, "Ensemble size: a positive integer or \"2d\"")->capture_default_str();
  grad_cmd->add_flag("--constant-probe", constant_probe, "qfi with H = I: the objective is constant");

  // oracle-compare
  auto* oracle_cmd = app.add_subcommand("oracle-compare", "Compare solver values with closed-form references");
  std::string suite;
  int trials = 20;
  std::string oracle_out;
  SolverFlags oracle_flags;
  oracle_cmd->add_option("--suite", suite, "eof-2qubit, qfi, coherence or magic-octahedron")->required();
  oracle_cmd->add_option("--trials", trials, "Number of random trials")->capture_default_str();
  oracle_cmd->add_option("--out", oracle_out, "Optional JSON report destination");
  oracle_flags.attach(oracle_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*solve_cmd) {
      DensityMatrix rho = io::read_state_file(state_path);
      json input{{"state_file", state_path}};
      const MeasureKind kind = parse_measure(measure_name);
      MeasureSpec spec;
      switch (kind) {
        case MeasureKind::Eof:
        case MeasureKind::LinearEntropy: {
          Bipartition b;
          if (!factors_text.empty()) {
            b = parse_factors(factors_text);
            rho = rho.with_factors({b.d_a, b.d_b});
          } else if (rho.factors().size() == 2) {
            b = {rho.factors()[0], rho.factors()[1]};
          } else {
            throw InvalidInput(std::string(to_string(kind)) + " needs --factors or a state file with two factors");
          }
          spec = kind == MeasureKind::Eof ? MeasureSpec::eof(b.d_a, b.d_b) : MeasureSpec::linear_entropy(b.d_a, b.d_b);
          break;
        }
        case MeasureKind::GeometricCoherence:
          spec = MeasureSpec::coherence();
          break;
        case MeasureKind::StabilizerPurity:
          spec = MeasureSpec::stabilizer_purity(alpha);
          break;
        case MeasureKind::QfiVariance:
          if (hamiltonian_path.empty()) throw InvalidInput("qfi needs --hamiltonian");
          spec = MeasureSpec::qfi(io::read_operator_file(hamiltonian_path));
          input["hamiltonian_file"] = hamiltonian_path;
          break;
        case MeasureKind::Holevo:
          if (channel_path.empty()) throw InvalidInput("holevo needs --channel");
          spec = MeasureSpec::holevo(io::read_channel_file(channel_path));
          input["channel_file"] = channel_path;
          break;
      }
      spec.validate(rho.dim());
      SolverConfig config = solve_flags.config();
      config.ensemble_size = config.resolved_ensemble_size(rho.dim());
      const SolveInputs inputs{std::move(rho), std::move(spec), config, input};
      const SolveResult result = solve(inputs.rho, inputs.spec, inputs.config);
      emit_json(make_run_record(inputs, result), out_path, out);
      if (!result.converged) {
        err << "solve: best restart did not converge\n";
        return kExitNumerical;
      }
      return kExitOk;
    }

    if (*sweep_cmd) {
      const SolverConfig config = sweep_flags.config();
      SweepTable table;
      if (*werner_cmd) {
        if (werner_d < 2) throw InvalidInput("--d must be at least 2");
        table = sweep_werner(Eigen::Index(werner_d), parse_grid(alphas_text, "--alphas"), config);
      } else if (*coherent_cmd) {
        std::vector<Eigen::Index> dims;
        for (const double v : parse_grid(dims_text, "--d")) {
          if (v < 1 || v != std::floor(v)) throw InvalidInput("--d entries must be positive integers");
          dims.push_back(Eigen::Index(v));
        }
        table = sweep_coherent(dims, parse_grid(ps_text, "--p"), config);
      } else {
        table = sweep_bloch_section(parse_plane(plane_text), grid, config);
      }
      emit_csv(table, sweep_out, out);
      for (const auto& row : table.rows) {
        if (!row.converged) {
          err << "sweep: some grid points did not converge\n";
          return kExitNumerical;
        }
      }
      return kExitOk;
    }

    if (*grad_cmd) {
      GradcheckOptions opt;
      opt.measure = parse_measure(grad_measure);
      if (grad_d < 2) throw InvalidInput("--d must be at least 2");
      opt.dim = Eigen::Index(grad_d);
      opt.ensemble_size = parse_ensemble_size(grad_n);
      opt.seed = grad_seed;
      opt.points = grad_points;
      opt.constant_probe = constant_probe;
      if (grad_triv != "all") opt.trivializations = {parse_trivialization(grad_triv)};
      const GradcheckReport report = gradient_check(opt);
      out << "trivialization,point,relative_error,gradient_norm\n" << std::setprecision(6);
      for (const auto& p : report.points) {
        out << to_string(p.trivialization) << ',' << p.index << ',' << p.relative_error << ',' << p.gradient_norm
            << '\n';
      }
      out << "# max relative error " << report.max_relative_error << " (threshold " << opt.threshold << "): "
          << (report.passed ? "ok" : "FAILED") << '\n';
      return report.passed ? kExitOk : kExitNumerical;
    }

    if (*oracle_cmd) {
      const OracleReport report = oracle_compare(suite, trials, oracle_flags.seed, oracle_flags.config());
      out << std::setprecision(6) << "suite " << report.suite << ": " << report.rows.size() << " cases, max |dev| "
          << report.max_abs_deviation << ", mean |dev| " << report.mean_abs_deviation << ", violations "
          << report.violations << ", tolerance " << report.tolerance << ": " << (report.passed ? "ok" : "FAILED")
          << '\n';
      if (!oracle_out.empty()) {
        json j{{"suite", report.suite},
               {"max_abs_deviation", report.max_abs_deviation},
               {"mean_abs_deviation", report.mean_abs_deviation},
               {"violations", report.violations},
               {"tolerance", report.tolerance},
               {"passed", report.passed},
               {"rows", json::array()}};
        for (const auto& row : report.rows) {
          j["rows"].push_back({{"label", row.label},
                               {"value", row.value},
                               {"oracle", row.oracle},
                               {"converged", row.converged},
                               {"reconstruction_residual", row.reconstruction_residual}});
        }
        io::write_json(oracle_out, j);
      }
      return report.passed ? kExitOk : kExitNumerical;
    }
  } catch (const SolverFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace cvxroof::cli
