#include "rvolt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rvolt {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::young: return "young";
    case Regime::singular: return "singular";
    case Regime::rough: return "rough";
  }
  return "young";
}

Regime regime_from_string(const std::string& s) {
  if (s == "young") return Regime::young;
  if (s == "singular") return Regime::singular;
  if (s == "rough") return Regime::rough;
  throw ValidationError("unknown regime '" + s + "' (expected young, singular or rough)");
}

double VolterraProblem::default_young_kappa(double gamma) { return 0.5 * (1.0 / (1.0 + gamma) + 1.0); }

double VolterraProblem::default_rough_kappa(double gamma) { return 0.5 * (std::max(0.0, 1.0 / gamma - 2.0) + 1.0); }

VolterraProblem VolterraProblem::young(Coefficient sigma, VectorXd a, Path driver, double gamma, double kappa) {
  VolterraProblem p(std::move(driver));
  p.regime = Regime::young;
  p.coefficient = std::move(sigma);
  p.a = std::move(a);
  p.gamma = gamma;
  p.kappa = std::isnan(kappa) ? default_young_kappa(gamma) : kappa;
  return p;
}

VolterraProblem VolterraProblem::singular(KernelSpec kernel, VectorXd a, Path driver) {
  VolterraProblem p(std::move(driver));
  p.regime = Regime::singular;
  p.gamma = kernel.gamma;
  p.kappa = kernel.kappa;
  p.kernel = std::move(kernel);
  p.a = std::move(a);
  return p;
}

VolterraProblem VolterraProblem::rough(Coefficient sigma, VectorXd a, Path driver, LevyArea lift, double gamma,
                                       double kappa) {
  VolterraProblem p(std::move(driver));
  p.regime = Regime::rough;
  p.coefficient = std::move(sigma);
  p.a = std::move(a);
  p.lift = std::move(lift);
  p.gamma = gamma;
  p.kappa = std::isnan(kappa) ? default_rough_kappa(gamma) : kappa;
  return p;
}

void VolterraProblem::validate() const {
  if (a.size() < 1 || !a.allFinite()) throw ValidationError("initial condition must be a finite nonempty vector");
  if (!driver.values().allFinite()) throw ValidationError("driver must be finite");
  if (regime == Regime::singular) {
    try {
      kernel.validate();
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
    if (kernel.psi.d != a.size() || kernel.psi.n != driver.dim()) {
      throw ValidationError("psi must map R^d to d x n matrices matching the initial condition and driver");
    }
    return;
  }
  if (!coefficient.eval) throw ValidationError("coefficient has no value function");
  if (coefficient.state_dim != a.size() || coefficient.noise_dim != driver.dim()) {
    throw ValidationError("coefficient dimensions must match the initial condition and driver");
  }
  if (!(kappa > 0.0 && kappa <= 1.0)) throw ValidationError("kappa must lie in (0, 1]");
  if (regime == Regime::young) {
    if (!(gamma > 0.5 && gamma <= 1.0)) throw ValidationError("gamma must lie in (1/2, 1]");
    if (!(kappa * (1.0 + gamma) > 1.0)) throw ValidationError("constraint violated: kappa (1 + gamma) > 1");
    return;
  }
  if (!(gamma > 1.0 / 3.0 && gamma <= 0.5)) throw ValidationError("gamma must lie in (1/3, 1/2]");
  if (!(gamma * (kappa + 2.0) > 1.0)) throw ValidationError("constraint violated: gamma (kappa + 2) > 1");
  if (!lift) throw ValidationError("rough regime needs a Levy area lift");
  if (!(lift->grid() == driver.grid()) || lift->path().values() != driver.values()) {
    throw ValidationError("lift must be built on the driver");
  }
  if (!coefficient.d_state) throw ValidationError("rough regime needs the state derivative of the coefficient");
}

PicardResidual picard_residual(const Path& y_old, const Path& y_new, double gamma) {
  if (!(y_old.grid() == y_new.grid()) || y_old.dim() != y_new.dim()) {
    throw std::invalid_argument("Picard residual needs paths on the same grid");
  }
  const Path diff(y_new.grid(), y_new.values() - y_old.values());
  return {sup_norm(diff), holder_norm(diff, gamma).value};
}

namespace {

using Values = Path::Values;

// Contribution of cell k to Gamma(y)_m: the left-point germ of the regime with
// running time t_m. Rough germs add the lift term with y'_k = sigma(u_k, u_k, y_k).
class Scheme {
 public:
  explicit Scheme(const VolterraProblem& p) : p_(p), grid_(p.grid()), d_(p.state_dim()) {
    if (p.regime == Regime::singular) weights_ = kernel_weights(grid_, p.kernel.alpha);
    time_free_ = p.regime != Regime::singular && !p.coefficient.depends_on_time;
  }

  Index dim() const { return d_; }
  // True when the germ does not involve t_m, so Gamma(y) is a prefix sum.
  bool time_free() const { return time_free_; }
  bool singular() const { return p_.regime == Regime::singular; }

  // psi(y_k) dx_k for the singular regime.
  VectorXd singular_factor(Index k, const VectorXd& yk) const {
    return p_.kernel.psi.value(yk) * p_.driver.increment(k, k + 1);
  }
  double weight(Index m, Index k) const { return weights_[static_cast<std::size_t>(m - k)]; }

  MatrixXd yprime(Index k, const VectorXd& yk) const {
    const double u = grid_.t(k);
    return p_.coefficient(u, u, yk);
  }

  // yp is ignored outside the rough regime.
  VectorXd germ(Index m, Index k, const VectorXd& yk, const MatrixXd& yp) const {
    const double t = time_free_ ? grid_.t(k) : grid_.t(m), u = grid_.t(k);
    const VectorXd dx = p_.driver.increment(k, k + 1);
    VectorXd g = p_.regime == Regime::rough ? rough_germ(p_.coefficient, t, u, yk, yp, dx, p_.lift->cell(k))
                                            : VectorXd(p_.coefficient(t, u, yk) * dx);
    // Half-cell shift in u: adds 1/2 dt d_u sigma dx, of order dt^{1 + gamma}, so the
    // sewn limit is unchanged while kernels like t - u are integrated exactly.
    if (p_.coefficient.d_inner) g.noalias() += 0.5 * grid_.step() * p_.coefficient.d_inner(t, u, yk) * dx;
    return g;
  }

 private:
  const VolterraProblem& p_;
  Grid grid_;
  Index d_;
  std::vector<double> weights_;
  bool time_free_ = false;
};

// Row k of a RowMajor value matrix as a vector.
VectorXd row(const Values& v, Index k) { return v.row(k).transpose(); }

// Fixed contributions of cells k < s0 to Gamma(y)_m for m in (s0, s1], row m - s0 - 1.
Values history(const Scheme& s, const Values& y, const std::vector<MatrixXd>& yp, Index s0, Index s1) {
  const Index len = s1 - s0;
  Values h = Values::Zero(len, s.dim());
  if (s.time_free()) {
    VectorXd total = VectorXd::Zero(s.dim());
    for (Index k = 0; k < s0; ++k) total += s.germ(k, k, row(y, k), yp[static_cast<std::size_t>(k)]);
    h.rowwise() = total.transpose();
    return h;
  }
  if (s.singular()) {
    Values phi(s0, s.dim());
    for (Index k = 0; k < s0; ++k) phi.row(k) = s.singular_factor(k, row(y, k)).transpose();
    for (Index m = s0 + 1; m <= s1; ++m)
      for (Index k = 0; k < s0; ++k) h.row(m - s0 - 1) += s.weight(m, k) * phi.row(k);
    return h;
  }
  for (Index m = s0 + 1; m <= s1; ++m)
    for (Index k = 0; k < s0; ++k) {
      h.row(m - s0 - 1) += s.germ(m, k, row(y, k), yp[static_cast<std::size_t>(k)]).transpose();
    }
  return h;
}

// Gamma(y)_m for m in (s0, s1] given the current iterate on the window.
Values picard_map(const Scheme& s, const VolterraProblem& p, const Values& y, std::vector<MatrixXd>& yp,
                  const Values& hist, Index s0, Index s1, bool rough) {
  const Index len = s1 - s0;
  if (rough)
    for (Index k = s0; k < s1; ++k) yp[static_cast<std::size_t>(k)] = s.yprime(k, row(y, k));
  Values out(len, s.dim());
  if (s.time_free()) {
    VectorXd acc = VectorXd::Zero(s.dim());
    for (Index k = s0; k < s1; ++k) {
      acc += s.germ(k, k, row(y, k), yp[static_cast<std::size_t>(k)]);
      out.row(k - s0) = (p.a + acc).transpose() + hist.row(k - s0);
    }
    return out;
  }
  if (s.singular()) {
    Values phi(len, s.dim());
    for (Index k = s0; k < s1; ++k) phi.row(k - s0) = s.singular_factor(k, row(y, k)).transpose();
    for (Index m = s0 + 1; m <= s1; ++m) {
      VectorXd acc = p.a + hist.row(m - s0 - 1).transpose();
      for (Index k = s0; k < m; ++k) acc += s.weight(m, k) * phi.row(k - s0).transpose();
      out.row(m - s0 - 1) = acc.transpose();
    }
    return out;
  }
  for (Index m = s0 + 1; m <= s1; ++m) {
    VectorXd acc = p.a + hist.row(m - s0 - 1).transpose();
    for (Index k = s0; k < m; ++k) acc += s.germ(m, k, row(y, k), yp[static_cast<std::size_t>(k)]);
    out.row(m - s0 - 1) = acc.transpose();
  }
  return out;
}

SolverReport run(const VolterraProblem& p, const SolverOptions& o) {
  p.validate();
  if (!(o.tol > 0.0) || o.max_iter < 1 || !(o.growth >= 1.0)) {
    throw ValidationError("solver needs tol > 0, max_iter >= 1 and growth >= 1");
  }
  const Grid& grid = p.grid();
  const Index n_steps = grid.n_steps(), d = p.state_dim();
  const bool rough = p.regime == Regime::rough;
  const double exponent = p.regime == Regime::singular ? p.kappa : p.gamma;
  const Index max_window = o.max_window > 0 ? std::min(o.max_window, n_steps) : std::max<Index>(1, n_steps / 2);
  Index length = o.initial_window > 0 ? o.initial_window : std::max<Index>(1, n_steps / 4);
  length = std::min(length, max_window);

  Scheme scheme(p);
  Values y = Values::Zero(n_steps + 1, d);
  y.row(0) = p.a.transpose();
  std::vector<MatrixXd> yp(static_cast<std::size_t>(n_steps + 1));
  if (rough) yp[0] = scheme.yprime(0, p.a);

  SolverReport report{.regime = p.regime, .solution = Path(grid, Values::Zero(n_steps + 1, d))};
  report.tol = o.tol;
  report.max_iter = o.max_iter;

  Index s0 = 0;
  while (s0 < n_steps) {
    const Index s1 = std::min(s0 + length, n_steps);
    const Values hist = history(scheme, y, yp, s0, s1);
    Values current(s1 - s0, d);
    current.rowwise() = (y.row(s0).array() + o.guess_offset).matrix();
    WindowLog log{.start = s0, .end = s1};
    bool ok = false;
    for (int it = 1; it <= o.max_iter; ++it) {
      y.middleRows(s0 + 1, s1 - s0) = current;
      const Values next = picard_map(scheme, p, y, yp, hist, s0, s1, rough);
      const double residual = (next - current).cwiseAbs().maxCoeff();
      current = next;
      log.iterations = it;
      log.residuals.push_back(residual);
      log.final_residual = residual;
      if (!std::isfinite(residual)) break;
      if (residual < o.tol) {
        ok = true;
        break;
      }
    }
    if (ok) {
      y.middleRows(s0 + 1, s1 - s0) = current;
      if (rough)
        for (Index k = s0 + 1; k <= s1; ++k) yp[static_cast<std::size_t>(k)] = scheme.yprime(k, row(y, k));
      log.holder_norm = holder_norm(Path(grid, y), exponent, s0, s1).value;
      report.windows.push_back(std::move(log));
      s0 = s1;
      length = std::min(max_window, static_cast<Index>(std::ceil(o.growth * static_cast<double>(length))));
      continue;
    }
    ++report.rejections;
    length /= 2;
    if (length < 1) {
      report.message = "window length fell below one grid cell at t = " + std::to_string(grid.t(s0));
      break;
    }
  }

  report.solved_index = s0;
  report.converged = s0 == n_steps;
  if (report.converged) report.message = "converged";
  for (Index k = s0 + 1; k <= n_steps; ++k) y.row(k) = y.row(s0);
  report.solution = Path(grid, y);
  if (rough) {
    MatrixPath prime(grid, d, p.driver.dim());
    for (Index k = 0; k <= n_steps; ++k) prime[k] = scheme.yprime(k, row(y, k));
    report.yprime = std::move(prime);
    report.proven_local_until = report.windows.empty() ? 0 : report.windows.front().end;
    report.heuristic_extension = report.solved_index > report.proven_local_until;
  }
  return report;
}

void require(const VolterraProblem& p, Regime r) {
  if (p.regime != r) throw ValidationError("problem regime is " + to_string(p.regime) + ", expected " + to_string(r));
}

}  // namespace

SolverReport solve_young(const VolterraProblem& p, const SolverOptions& options) {
  require(p, Regime::young);
  return run(p, options);
}

SolverReport solve_singular(const VolterraProblem& p, const SolverOptions& options) {
  require(p, Regime::singular);
  return run(p, options);
}

SolverReport solve_rough(const VolterraProblem& p, const SolverOptions& options) {
  require(p, Regime::rough);
  return run(p, options);
}

SolverReport solve(const VolterraProblem& p, const SolverOptions& options) { return run(p, options); }

}  // namespace rvolt
