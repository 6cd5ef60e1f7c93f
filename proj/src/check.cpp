#include "rvolt/cli.hpp"

#include "rvolt/regression.hpp"
#include "rvolt/rough.hpp"
#include "rvolt/sewing.hpp"
#include "rvolt/singular.hpp"
#include "rvolt/young.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace rvolt::cli {

using nlohmann::json;

namespace {

struct Check {
  std::string name;
  std::string module;
  double measured = 0.0;
  double threshold = 0.0;
  /// "<=" or ">=".
  std::string relation = "<=";
};

bool passed(const Check& c) {
  if (!std::isfinite(c.measured)) return false;
  return c.relation == "<=" ? c.measured <= c.threshold : c.measured >= c.threshold;
}

Path random_path(const Grid& grid, Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Path::Values v(grid.n_points(), dim);
  for (Index i = 0; i < v.rows(); ++i)
    for (Index c = 0; c < dim; ++c) v(i, c) = normal(rng);
  return Path(grid, v);
}

Path random_walk(const Grid& grid, Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Path::Values v = Path::Values::Zero(grid.n_points(), dim);
  for (Index i = 1; i < v.rows(); ++i)
    for (Index c = 0; c < dim; ++c) v(i, c) = v(i - 1, c) + std::sqrt(grid.step()) * normal(rng);
  return Path(grid, v);
}

Path random_smooth(const Grid& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double a[3], w[3], p[3];
  for (int k = 0; k < 3; ++k) {
    a[k] = unif(rng);
    w[k] = 1.0 + 3.0 * std::abs(unif(rng));
    p[k] = 3.0 * unif(rng);
  }
  return Path::sample(grid, 1, [&](double t) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += a[k] * std::sin(w[k] * t + p[k]);
    return VectorXd::Constant(1, s);
  });
}

MatrixPath row_path(const Path& p) {
  MatrixPath m(p.grid(), 1, p.dim());
  for (Index i = 0; i < p.grid().n_points(); ++i) m[i] = p[i].transpose();
  return m;
}

Check delta_delta_zero() {
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (Index n : {8, 16, 32}) {
    const Path f = random_path(Grid(1.0, n), 2, rng);
    const double scale = std::max(1.0, f.values().cwiseAbs().maxCoeff());
    worst = std::max(worst, max_abs(delta2(delta1(f))) / scale);
  }
  return {"delta_delta_zero", "algebra", worst, 1e-12};
}

Check leibniz() {
  std::mt19937_64 rng(2);
  double worst = 0.0;
  for (Index n : {8, 16, 32}) {
    const Grid grid(1.0, n);
    const Path f = random_path(grid, 1, rng), g = random_path(grid, 1, rng);
    const Path fg = pointwise_product(f, g);
    for (Index i = 0; i <= n; ++i)
      for (Index j = i; j <= n; ++j) {
        const double lhs = fg.increment(i, j)(0);
        const double rhs = f[i](0) * g.increment(i, j)(0) + f.increment(i, j)(0) * g[j](0);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
      }
  }
  return {"leibniz", "algebra", worst, 1e-12};
}

Check sewing_bound() {
  std::mt19937_64 rng(2024);
  const double mu = 1.5, c = sewing_constant(mu);
  const Grid grid(1.0, 32);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Path z = random_smooth(grid, rng), x = random_smooth(grid, rng);
    const auto g = left_product(row_path(z), delta1(x));
    const double lhs = holder_norm(lambda_of(g, mu).cached(), mu).value;
    const double rhs = c * split_holder_norm(delta2(g), mu / 2, mu / 2);
    worst = std::max(worst, rhs > 0.0 ? lhs / rhs : 0.0);
  }
  return {"sewing_bound_ratio", "algebra", worst, 1.0};
}

Check young_rate() {
  std::vector<double> ns, errs;
  for (Index n = 1 << 6; n <= (1 << 10); n *= 2) {
    const Path x = drivers::builtin("linear", Grid(1.0, n));
    const double v = young_integral(row_path(x), x, 0, n)(0);
    ns.push_back(static_cast<double>(n));
    errs.push_back(std::abs(v - 0.5) / 0.5);
  }
  return {"young_left_point_rate", "young", fit_rate(ns, errs).slope, 0.8, ">="};
}

// Boundedness surrogate for the Volterra map: its gamma-Hölder norm is stable under refinement.
Check volterra_norm_stability() {
  const auto sigma = coefficients::trigonometric(1, 1, 0.5, 1.0, 2.0);
  std::vector<double> norms;
  for (Index n : {64, 128, 256}) {
    const Grid grid(1.0, n);
    const Path x = drivers::builtin("sine", grid);
    const Path y = Path::sample(grid, 1, [](double t) { return VectorXd::Constant(1, std::cos(2 * t)); });
    norms.push_back(holder_norm(volterra_path_young(sigma, y, x), 0.9).value);
  }
  double worst = 0.0;
  for (double v : norms) worst = std::max(worst, std::abs(v / norms.front() - 1.0));
  return {"volterra_norm_stability", "young", worst, 0.2};
}

// |(t-u)^{-a} - (s-u)^{-a}| <= a^b (s-u)^{-a-b} (t-s)^b.
Check kernel_bound() {
  const double alpha = 0.3;
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (double beta : {0.5, 0.6, 1.0}) {
    for (int k = 0; k < 2000; ++k) {
      const double u = unif(rng), s = u + 1e-6 + unif(rng), t = s + 1e-6 + 2.0 * unif(rng) * unif(rng);
      const double v = std::abs(kernel_increment(t, s, u, alpha));
      worst = std::max(worst, v / (std::pow(alpha, beta) * std::pow(s - u, -alpha - beta) * std::pow(t - s, beta)));
    }
  }
  return {"kernel_increment_bound_ratio", "singular", worst, 1.0 + 1e-12};
}

Check singular_power() {
  const KernelSpec k{0.25, coefficients::constant_state(MatrixXd::Ones(1, 1)), 0.9, 0.5};
  const Grid grid(1.0, 1024);
  const Path x = drivers::builtin("linear", grid);
  const Path z = singular_path(k, Path::constant(grid, VectorXd::Zero(1)), x);
  return {"singular_power_endpoint_error", "singular", std::abs(z[1024](0) - 4.0 / 3.0), 1.4e-2};
}

Check chen(double sign) {
  std::mt19937_64 rng(7);
  const auto xx = LevyArea::piecewise_linear(random_walk(Grid(1.0, 16), 2, rng));
  return {"chen_relation", "rough", chen_defect(xx, sign), 1e-13};
}

Check lift_symmetry() {
  std::mt19937_64 rng(7);
  const auto xx = LevyArea::piecewise_linear(random_walk(Grid(1.0, 16), 2, rng));
  return {"lift_symmetry", "rough", symmetry_defect(xx), 1e-13};
}

// Remainder of the rough Volterra increment keeps a bounded 2 gamma norm under refinement.
Check rough_remainder() {
  const double gamma = 0.45;
  const auto sigma = coefficients::trigonometric(1, 1, 0.9, 0.5, 2.0);
  std::vector<double> norms;
  for (Index n : {16, 32, 64}) {
    const Grid grid(1.0, n);
    const Path x = Path::sample(grid, 1, [](double t) { return VectorXd::Constant(1, std::sin(3 * t)); });
    Path::Values v(grid.n_points(), 1);
    MatrixPath d(grid, 1, 1);
    for (Index k = 0; k < grid.n_points(); ++k) {
      v(k, 0) = 0.7 * std::sin(x[k](0)) + 0.2 * x[k](0);
      d[k](0, 0) = 0.7 * std::cos(x[k](0)) + 0.2;
    }
    const ControlledPath y(Path(grid, v), d, x, gamma, 2 * gamma);
    const auto xx = LevyArea::piecewise_linear(x);
    Increment2 r(grid, 1, [&](Index i, Index j) { return volterra_remainder_rough(sigma, y, xx, i, j).remainder(); });
    norms.push_back(holder_norm(r, 2 * gamma).value);
  }
  return {"rough_remainder_norm_growth", "rough", std::max(norms[1], norms[2]) / norms[0], 1.5};
}

Check fbm_determinism() {
  const FbmSpec spec{0.7, 2, Grid(1.0, 1024), 99};
  const Path a = generate_fbm(spec), b = generate_fbm(spec);
  return {"fbm_determinism_max_difference", "signals", (a.values() - b.values()).cwiseAbs().maxCoeff(), 0.0};
}

Check holder_linear() {
  const Path p = drivers::builtin("linear", Grid(1.0, 1024));
  return {"holder_estimate_linear_error", "signals", std::abs(estimate_holder(p, 8).exponent - 1.0), 1e-6};
}

VolterraProblem exp_problem(Index n) {
  return VolterraProblem::young(coefficients::identity(), VectorXd::Ones(1), drivers::builtin("sine", Grid(1.0, n)), 0.9);
}

Check solver_exp() {
  const auto r = solve_young(exp_problem(1024));
  const double err = r.converged ? std::abs(r.solution[1024](0) / std::exp(std::sin(1.0)) - 1.0) : INFINITY;
  return {"young_exponential_oracle_error", "solver", err, 1e-3};
}

Check solver_uniqueness() {
  SolverOptions shifted;
  shifted.guess_offset = 0.5;
  const auto a = solve_young(exp_problem(256)), b = solve_young(exp_problem(256), shifted);
  const double gap = a.converged && b.converged ? picard_residual(a.solution, b.solution, 0.9).sup : INFINITY;
  return {"picard_uniqueness_gap", "solver", gap, 10.0 * a.tol};
}

}  // namespace

std::vector<std::string> check_suites() { return {"all", "algebra", "young", "singular", "rough", "signals", "solver"}; }

CommandResult cmd_check(const std::string& suite, const CheckOptions& options) {
  const auto suites = check_suites();
  if (std::find(suites.begin(), suites.end(), suite) == suites.end()) {
    throw ValidationError("unknown check suite '" + suite + "'");
  }
  const std::vector<std::pair<std::string, std::function<Check()>>> all{
      {"algebra", delta_delta_zero},
      {"algebra", leibniz},
      {"algebra", sewing_bound},
      {"young", young_rate},
      {"young", volterra_norm_stability},
      {"singular", kernel_bound},
      {"singular", singular_power},
      {"rough", [&] { return chen(options.fault_chen ? -1.0 : 1.0); }},
      {"rough", lift_symmetry},
      {"rough", rough_remainder},
      {"signals", fbm_determinism},
      {"signals", holder_linear},
      {"solver", solver_exp},
      {"solver", solver_uniqueness},
  };
  json checks = json::array();
  bool ok = true;
  int failures = 0;
  for (const auto& [module, run] : all) {
    if (suite != "all" && suite != module) continue;
    const Check c = run();
    const bool pass = passed(c);
    ok = ok && pass;
    failures += pass ? 0 : 1;
    checks.push_back({{"name", c.name},
                      {"module", c.module},
                      {"passed", pass},
                      {"measured", c.measured},
                      {"relation", c.relation},
                      {"threshold", c.threshold}});
  }
  const json out = {{"suite", suite}, {"passed", ok}, {"checks", checks}};
  if (!ok) return {kExitCheckFailed, std::to_string(failures) + " checks failed", out};
  return {kExitOk, "all " + std::to_string(checks.size()) + " checks passed", out};
}

}  // namespace rvolt::cli
