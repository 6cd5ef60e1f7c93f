#include "rvolt/cli.hpp"

#include "rvolt/regression.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

namespace rvolt::cli {

using nlohmann::json;

double CoefficientConfig::param(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ValidationError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& target, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    target = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("key '" + std::string(key) + "' in " + where + " has the wrong type");
  }
}

void read_optional(const json& j, const char* key, std::optional<double>& target, const std::string& where) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    target.reset();
    return;
  }
  if (!j.at(key).is_number()) throw ValidationError("key '" + std::string(key) + "' in " + where + " must be a number or null");
  target = j.at(key).get<double>();
}

const std::map<std::string, std::set<std::string>>& young_families() {
  static const std::map<std::string, std::set<std::string>> f{
      {"zero", {}},
      {"constant", {"value"}},
      {"identity", {}},
      {"linear", {"scale", "offset"}},
      {"trigonometric", {"amplitude", "offset", "frequency"}},
      {"affine_kernel", {}},
  };
  return f;
}

const std::map<std::string, std::set<std::string>>& psi_families() {
  static const std::map<std::string, std::set<std::string>> f{
      {"constant", {"value"}},
      {"linear", {"scale"}},
      {"sine", {"amplitude", "offset"}},
  };
  return f;
}

Index noise_dim(const ExperimentConfig& c) {
  if (c.driver.kind == "fbm") return c.driver.dim;
  return drivers::builtin(c.driver.name, Grid(c.horizon, 1)).dim();
}

void require_scalar(Index d, Index n, const std::string& what) {
  if (d != 1 || n != 1) throw ValidationError(what + " needs a scalar state and a scalar driver");
}

json rng_json(const ExperimentConfig& c, const FbmInfo& info) {
  if (c.driver.kind != "fbm") return nullptr;
  return {{"generator", rng_description()},
          {"seed", c.driver.seed},
          {"method", to_string(info.method)},
          {"fell_back", info.fell_back}};
}

void ensure_dir(const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory " + out.string() + ": " + ec.message());
}

std::ofstream open_output(const std::filesystem::path& file) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw IoError("cannot open " + file.string() + " for writing");
  return os;
}

void finish(std::ofstream& os, const std::filesystem::path& file) {
  os.flush();
  if (!os) throw IoError("failed writing " + file.string());
}

// Benchmark exponent a rate study is compared with.
double rate_benchmark(const ExperimentConfig& c) {
  const bool fbm = c.driver.kind == "fbm";
  if (c.regime == "singular") return c.gamma - c.alpha;
  if (c.regime == "young") return fbm ? 2.0 * c.driver.hurst - 1.0 : 1.0;
  return fbm ? std::nan("") : 1.0;
}

}  // namespace

json to_json(const ExperimentConfig& c) {
  return {
      {"version", c.version},
      {"regime", c.regime},
      {"coefficient", {{"family", c.coefficient.family}, {"params", c.coefficient.params}}},
      {"kernel", {{"alpha", c.alpha}}},
      {"driver",
       {{"kind", c.driver.kind},
        {"name", c.driver.name},
        {"hurst", c.driver.hurst},
        {"dim", c.driver.dim},
        {"seed", c.driver.seed},
        {"method", c.driver.method}}},
      {"grid", {{"n", c.n_steps}, {"horizon", c.horizon}}},
      {"exponents", {{"gamma", c.gamma}, {"kappa", optional_number(c.kappa)}}},
      {"initial", c.initial},
      {"solver", {{"tol", optional_number(c.tol)}, {"max_iter", c.max_iter}, {"initial_window", c.initial_window}}},
      {"oracle", c.oracle},
      {"output", {{"dir", c.out_dir}, {"export_lift", c.export_lift}, {"timing", c.timing}}},
  };
}

ExperimentConfig config_from_json(const json& j) {
  reject_unknown(j, {"version", "regime", "coefficient", "kernel", "driver", "grid", "exponents", "initial", "solver",
                     "oracle", "output"},
                 "config");
  ExperimentConfig c;
  read(j, "version", c.version, "config");
  if (c.version != kConfigVersion) {
    throw ValidationError("unsupported config version " + std::to_string(c.version) + " (expected " +
                          std::to_string(kConfigVersion) + ")");
  }
  read(j, "regime", c.regime, "config");
  read(j, "oracle", c.oracle, "config");
  read(j, "initial", c.initial, "config");
  if (j.contains("coefficient")) {
    const auto& s = j.at("coefficient");
    reject_unknown(s, {"family", "params"}, "coefficient");
    read(s, "family", c.coefficient.family, "coefficient");
    read(s, "params", c.coefficient.params, "coefficient");
  }
  if (j.contains("kernel")) {
    reject_unknown(j.at("kernel"), {"alpha"}, "kernel");
    read(j.at("kernel"), "alpha", c.alpha, "kernel");
  }
  if (j.contains("driver")) {
    const auto& s = j.at("driver");
    reject_unknown(s, {"kind", "name", "hurst", "dim", "seed", "method"}, "driver");
    read(s, "kind", c.driver.kind, "driver");
    read(s, "name", c.driver.name, "driver");
    read(s, "hurst", c.driver.hurst, "driver");
    read(s, "dim", c.driver.dim, "driver");
    read(s, "seed", c.driver.seed, "driver");
    read(s, "method", c.driver.method, "driver");
  }
  if (j.contains("grid")) {
    reject_unknown(j.at("grid"), {"n", "horizon"}, "grid");
    read(j.at("grid"), "n", c.n_steps, "grid");
    read(j.at("grid"), "horizon", c.horizon, "grid");
  }
  if (j.contains("exponents")) {
    reject_unknown(j.at("exponents"), {"gamma", "kappa"}, "exponents");
    read(j.at("exponents"), "gamma", c.gamma, "exponents");
    read_optional(j.at("exponents"), "kappa", c.kappa, "exponents");
  }
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    reject_unknown(s, {"tol", "max_iter", "initial_window"}, "solver");
    read_optional(s, "tol", c.tol, "solver");
    read(s, "max_iter", c.max_iter, "solver");
    read(s, "initial_window", c.initial_window, "solver");
  }
  if (j.contains("output")) {
    const auto& s = j.at("output");
    reject_unknown(s, {"dir", "export_lift", "timing"}, "output");
    read(s, "dir", c.out_dir, "output");
    read(s, "export_lift", c.export_lift, "output");
    read(s, "timing", c.timing, "output");
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw IoError("cannot read config " + file.string());
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + file.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

double resolved_tolerance(const ExperimentConfig& c) {
  if (c.tol) return *c.tol;
  return c.driver.kind == "fbm" ? kFbmTolerance : kSmoothTolerance;
}

Coefficient make_coefficient(const ExperimentConfig& c, Index d, Index n) {
  const auto& f = c.coefficient;
  const auto family = young_families().find(f.family);
  if (family == young_families().end()) throw ValidationError("unknown coefficient family '" + f.family + "'");
  for (const auto& [key, value] : f.params) {
    if (!family->second.count(key)) throw ValidationError("family '" + f.family + "' has no parameter '" + key + "'");
  }
  if (f.family == "zero") return coefficients::zero(d, n);
  if (f.family == "constant") return coefficients::constant(MatrixXd::Constant(d, n, f.param("value", 1.0)));
  if (f.family == "identity") {
    require_scalar(d, n, "family 'identity'");
    return coefficients::identity();
  }
  if (f.family == "linear") {
    std::vector<MatrixXd> slopes(static_cast<std::size_t>(d), MatrixXd::Zero(d, n));
    for (Index k = 0; k < d; ++k) slopes[static_cast<std::size_t>(k)].row(k).setConstant(f.param("scale", 1.0));
    return coefficients::linear(std::move(slopes), MatrixXd::Constant(d, n, f.param("offset", 0.0)));
  }
  if (f.family == "trigonometric") {
    return coefficients::trigonometric(d, n, f.param("amplitude", 1.0), f.param("offset", 0.0), f.param("frequency", 0.0));
  }
  require_scalar(d, n, "family 'affine_kernel'");
  return coefficients::affine_kernel();
}

KernelSpec make_kernel(const ExperimentConfig& c, Index d, Index n) {
  const auto& f = c.coefficient;
  const auto family = psi_families().find(f.family);
  if (family == psi_families().end()) throw ValidationError("unknown psi family '" + f.family + "' for the singular regime");
  for (const auto& [key, value] : f.params) {
    if (!family->second.count(key)) throw ValidationError("psi family '" + f.family + "' has no parameter '" + key + "'");
  }
  coefficients::StateFunction psi;
  if (f.family == "constant") {
    psi = coefficients::constant_state(MatrixXd::Constant(d, n, f.param("value", 1.0)));
  } else if (f.family == "linear") {
    require_scalar(d, n, "psi family 'linear'");
    psi = coefficients::linear_state(f.param("scale", 1.0));
  } else {
    psi = coefficients::sine_state(d, n, f.param("amplitude", 1.0), f.param("offset", 0.0));
  }
  const double kappa = c.kappa.value_or(KernelSpec::default_kappa(c.alpha, c.gamma));
  return KernelSpec{c.alpha, std::move(psi), c.gamma, kappa};
}

Path make_driver(const ExperimentConfig& c, Index n_steps, FbmInfo* info) {
  const Grid grid(c.horizon, n_steps);
  if (c.driver.kind == "fbm") {
    return generate_fbm({c.driver.hurst, c.driver.dim, grid, c.driver.seed, fbm_method_from_string(c.driver.method)}, info);
  }
  return drivers::builtin(c.driver.name, grid);
}

namespace {

Index lift_subgrid(const ExperimentConfig& c) {
  return c.driver.kind == "fbm" && c.regime == "rough" ? kLiftSubgrid : 1;
}

}  // namespace

DrivenInput make_input(const ExperimentConfig& c, FbmInfo* info) {
  const Index sub = lift_subgrid(c);
  if (sub == 1) return {make_driver(c, c.n_steps, info), std::nullopt};
  const Path fine = make_driver(c, c.n_steps * sub, info);
  return {fine.restricted(sub), LevyArea::from_refined(fine, sub)};
}

VolterraProblem make_problem(const ExperimentConfig& c, const Path& driver, std::optional<LevyArea> lift) {
  const Index d = static_cast<Index>(c.initial.size()), n = driver.dim();
  const VectorXd a = Eigen::Map<const VectorXd>(c.initial.data(), d);
  const Regime regime = regime_from_string(c.regime);
  if (regime == Regime::singular) return VolterraProblem::singular(make_kernel(c, d, n), a, driver);
  const double kappa = c.kappa.value_or(std::numeric_limits<double>::quiet_NaN());
  if (regime == Regime::young) return VolterraProblem::young(make_coefficient(c, d, n), a, driver, c.gamma, kappa);
  if (!lift) lift = LevyArea::piecewise_linear(driver);
  return VolterraProblem::rough(make_coefficient(c, d, n), a, driver, std::move(*lift), c.gamma, kappa);
}

void validate(const ExperimentConfig& c) {
  if (c.version != kConfigVersion) throw ValidationError("unsupported config version");
  const Regime regime = regime_from_string(c.regime);
  if (c.initial.empty()) throw ValidationError("initial condition must not be empty");
  if (!(c.horizon > 0.0) || !std::isfinite(c.horizon)) throw ValidationError("horizon must be positive");
  if (c.n_steps < 2 || (c.n_steps & (c.n_steps - 1)) != 0) throw ValidationError("grid n must be a power of two >= 2");
  if (c.max_iter < 1) throw ValidationError("max_iter must be at least 1");
  if (c.initial_window < 0 || c.initial_window > c.n_steps) throw ValidationError("initial_window must lie in [0, n]");
  if (c.tol && !(*c.tol > 0.0)) throw ValidationError("tol must be positive");
  if (c.driver.kind == "fbm") {
    try {
      FbmSpec{c.driver.hurst, c.driver.dim, Grid(c.horizon, c.n_steps), c.driver.seed}.validate();
      fbm_method_from_string(c.driver.method);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  } else if (c.driver.kind == "builtin") {
    const auto names = drivers::builtin_names();
    if (std::find(names.begin(), names.end(), c.driver.name) == names.end()) {
      throw ValidationError("unknown builtin driver '" + c.driver.name + "'");
    }
  } else {
    throw ValidationError("driver kind must be 'builtin' or 'fbm'");
  }
  // Exponents and dimensions, checked on a two-step stand-in driver.
  const Index n = noise_dim(c);
  const Path stand_in = Path::constant(Grid(c.horizon, 2), VectorXd::Zero(n));
  make_problem(c, stand_in).validate();

  const Index d = static_cast<Index>(c.initial.size());
  const std::string& f = c.coefficient.family;
  if (c.oracle == "none") return;
  if (c.oracle == "constant") {
    const bool zero = regime == Regime::singular ? f == "constant" && c.coefficient.param("value", 1.0) == 0.0 : f == "zero";
    if (!zero) throw ValidationError("oracle 'constant' needs a vanishing coefficient");
  } else if (c.oracle == "exponential") {
    if (regime == Regime::singular || f != "identity") {
      throw ValidationError("oracle 'exponential' needs the identity coefficient in the young or rough regime");
    }
  } else if (c.oracle == "half_square") {
    if (regime == Regime::singular || f != "affine_kernel" || c.driver.kind != "builtin" || c.driver.name != "linear") {
      throw ValidationError("oracle 'half_square' needs the affine_kernel family and the linear driver");
    }
  } else if (c.oracle == "power") {
    if (regime != Regime::singular || f != "constant" || d != 1 || c.driver.kind != "builtin" || c.driver.name != "linear") {
      throw ValidationError("oracle 'power' needs the singular regime, a scalar constant psi and the linear driver");
    }
  } else {
    throw ValidationError("unknown oracle '" + c.oracle + "'");
  }
}

std::optional<Path> oracle_solution(const ExperimentConfig& c, const Path& driver) {
  const auto& grid = driver.grid();
  const Index d = static_cast<Index>(c.initial.size());
  const VectorXd a = Eigen::Map<const VectorXd>(c.initial.data(), d);
  if (c.oracle == "constant") return Path::constant(grid, a);
  if (c.oracle == "exponential") {
    const double x0 = driver[0](0);
    return Path::sample(grid, 1, [&](double t) {
      const Index k = static_cast<Index>(std::llround(t / grid.step()));
      return VectorXd::Constant(1, a(0) * std::exp(driver[k](0) - x0));
    });
  }
  if (c.oracle == "half_square") {
    return Path::sample(grid, 1, [&](double t) { return VectorXd::Constant(1, a(0) + 0.5 * t * t); });
  }
  if (c.oracle == "power") {
    const double v = c.coefficient.param("value", 1.0), e = 1.0 - c.alpha;
    return Path::sample(grid, 1, [&](double t) { return VectorXd::Constant(1, a(0) + v * std::pow(t, e) / e); });
  }
  return std::nullopt;
}

std::filesystem::path resolve_out_dir(const ExperimentConfig& c, const std::optional<std::string>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kOutDirVariable); env && *env) return env;
  return c.out_dir;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_path_csv(const std::filesystem::path& file, const Path& p, const std::string& column) {
  auto os = open_output(file);
  os << "t";
  for (Index c = 0; c < p.dim(); ++c) os << ',' << column << '_' << c + 1;
  os << '\n';
  for (Index k = 0; k < p.grid().n_points(); ++k) {
    os << format_double(p.grid().t(k));
    for (Index c = 0; c < p.dim(); ++c) os << ',' << format_double(p.values()(k, c));
    os << '\n';
  }
  finish(os, file);
}

void write_lift_csv(const std::filesystem::path& file, const LevyArea& xx) {
  auto os = open_output(file);
  os << "i,j,k,value\n";
  for (Index k = 0; k < xx.grid().n_steps(); ++k)
    for (Index i = 0; i < xx.dim(); ++i)
      for (Index j = 0; j < xx.dim(); ++j) os << i + 1 << ',' << j + 1 << ',' << k << ',' << format_double(xx.cell(k)(i, j)) << '\n';
  finish(os, file);
}

void write_json(const std::filesystem::path& file, const json& j) {
  auto os = open_output(file);
  os << j.dump(2) << '\n';
  finish(os, file);
}

CommandResult cmd_gen(const ExperimentConfig& c, const std::filesystem::path& out) {
  validate(c);
  FbmInfo info;
  const auto [x, lift] = make_input(c, &info);
  ensure_dir(out);
  json files = json::array();
  write_path_csv(out / "driver.csv", x, "x");
  files.push_back("driver.csv");
  if (c.export_lift) {
    write_lift_csv(out / "lift.csv", lift ? *lift : LevyArea::piecewise_linear(x));
    files.push_back("lift.csv");
  }
  write_json(out / "config.json", to_json(c));
  files.push_back("config.json");
  return {kExitOk, "wrote " + std::to_string(files.size()) + " files to " + out.string(),
          {{"files", files}, {"rng", rng_json(c, info)}}};
}

CommandResult cmd_solve(const ExperimentConfig& c, const std::filesystem::path& out) {
  validate(c);
  FbmInfo info;
  auto [x, lift] = make_input(c, &info);
  const auto problem = make_problem(c, x, std::move(lift));
  SolverOptions options;
  options.tol = resolved_tolerance(c);
  options.max_iter = c.max_iter;
  options.initial_window = c.initial_window;
  const auto start = std::chrono::steady_clock::now();
  const SolverReport r = solve(problem, options);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const auto& grid = x.grid();
  json windows = json::array();
  for (const auto& w : r.windows) {
    windows.push_back({{"start", w.start},
                       {"end", w.end},
                       {"t_start", grid.t(w.start)},
                       {"t_end", grid.t(w.end)},
                       {"iterations", w.iterations},
                       {"final_residual", w.final_residual},
                       {"residuals", w.residuals},
                       {"holder_norm", w.holder_norm}});
  }
  const double exponent = problem.regime == Regime::singular ? problem.kappa : problem.gamma;
  const Index last = std::max<Index>(r.solved_index, 1);
  json norms = {{"exponent", exponent},
                {"solution_holder", holder_norm(r.solution, exponent, 0, last).value},
                {"solution_sup", sup_norm(r.solution)},
                {"yprime_sup", r.yprime ? json(sup_norm(*r.yprime)) : json(nullptr)},
                {"discrete_lower_bounds", true}};
  json errors = nullptr;
  if (const auto oracle = oracle_solution(c, x)) {
    const Index end = grid.n_steps();
    const double exact = (*oracle)[end](0), value = r.solution[end](0);
    errors = {{"oracle", c.oracle},
              {"endpoint_abs", std::abs(value - exact)},
              {"endpoint_rel", std::abs(value - exact) / std::max(std::abs(exact), 1e-300)},
              {"sup_abs", sup_norm(Path(grid, r.solution.values() - oracle->values()))}};
  }
  const bool rough = problem.regime == Regime::rough;
  json status = {{"message", r.message},
                 {"solved_index", r.solved_index},
                 {"solved_horizon", r.solved_horizon()},
                 {"rejections", r.rejections},
                 {"tol", r.tol},
                 {"max_iter", r.max_iter},
                 {"proven_local_until", rough ? json(grid.t(r.proven_local_until)) : json(nullptr)},
                 {"heuristic_extension", rough ? json(r.heuristic_extension) : json(nullptr)}};
  const json report = {{"config", to_json(c)},
                       {"converged", r.converged},
                       {"status", status},
                       {"windows", windows},
                       {"norms", norms},
                       {"errors", errors},
                       {"timing", c.timing ? json{{"solve_seconds", seconds}} : json(nullptr)},
                       {"rng", rng_json(c, info)}};

  ensure_dir(out);
  write_path_csv(out / "solution.csv", r.solution, "y");
  if (r.yprime) {
    const auto& yp = *r.yprime;
    Path flat = yp.flattened();
    write_path_csv(out / "yprime.csv", flat, "yprime");
  }
  write_json(out / "report.json", report);
  write_json(out / "config.json", to_json(c));
  if (!r.converged) return {kExitNonConvergence, "solver did not converge: " + r.message, report};
  return {kExitOk, "converged in " + std::to_string(r.windows.size()) + " windows", report};
}

json to_json(const RateReport& r) {
  return {{"mode", r.mode},           {"resolutions", r.resolutions}, {"errors", r.errors},
          {"slope", r.slope},         {"intercept", r.intercept},     {"residual", r.residual},
          {"benchmark", r.benchmark}, {"complete", r.complete}};
}

RateReport compute_rate(const ExperimentConfig& c, int refinements) {
  validate(c);
  if (refinements < 3) throw ValidationError("rate studies need at least 3 refinements");
  RateReport report;
  report.mode = c.oracle == "none" ? "self" : "oracle";
  report.benchmark = rate_benchmark(c);
  const bool self = report.mode == "self";
  // One driver at the finest level, restricted to every coarser grid.
  const int levels = refinements + (self ? 1 : 0);
  const Index top = c.n_steps << (levels - 1);
  const Index sub = lift_subgrid(c);
  const Path fine = make_driver(c, top * sub);
  const bool rough = c.regime == "rough";
  SolverOptions options;
  options.tol = resolved_tolerance(c);
  options.max_iter = c.max_iter;

  std::vector<Path> solutions;
  for (int level = 0; level < levels; ++level) {
    const Index n = c.n_steps << level, factor = top / n * sub;
    const Path x = fine.restricted(factor);
    std::optional<LevyArea> lift;
    if (rough) lift = LevyArea::from_refined(fine, factor);
    const auto r = solve(make_problem(c, x, std::move(lift)), options);
    if (!r.converged) break;
    if (self) {
      solutions.push_back(r.solution);
      if (level == 0) continue;
      const Path& coarse = solutions[static_cast<std::size_t>(level - 1)];
      report.resolutions.push_back(coarse.grid().n_steps());
      report.errors.push_back(sup_norm(Path(coarse.grid(), coarse.values() - r.solution.restricted(2).values())));
    } else {
      report.resolutions.push_back(n);
      report.errors.push_back(sup_norm(Path(x.grid(), r.solution.values() - oracle_solution(c, x)->values())));
    }
  }
  report.complete = static_cast<int>(report.resolutions.size()) == refinements;
  bool positive = report.resolutions.size() >= 2;
  for (double e : report.errors) positive = positive && e > 0.0;
  if (positive) {
    std::vector<double> ns(report.resolutions.begin(), report.resolutions.end());
    const auto fit = fit_rate(ns, report.errors);
    report.slope = fit.slope;
    report.intercept = fit.intercept;
    report.residual = fit.residual;
  } else {
    report.slope = report.intercept = report.residual = std::nan("");
  }
  return report;
}

CommandResult cmd_rate(const ExperimentConfig& c, int refinements, const std::filesystem::path& out) {
  const RateReport r = compute_rate(c, refinements);
  ensure_dir(out);
  {
    const auto file = out / "rate.csv";
    auto os = open_output(file);
    os << "n,error\n";
    for (std::size_t k = 0; k < r.errors.size(); ++k) os << r.resolutions[k] << ',' << format_double(r.errors[k]) << '\n';
    finish(os, file);
  }
  json j = to_json(r);
  j["config"] = to_json(c);
  write_json(out / "rate.json", j);
  if (!r.complete) return {kExitNonConvergence, "a solve failed; the rate table is partial", j};
  return {kExitOk, "slope " + format_double(r.slope), j};
}

}  // namespace rvolt::cli
