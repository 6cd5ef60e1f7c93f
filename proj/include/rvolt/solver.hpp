#pragma once

#include "rvolt/coefficient.hpp"
#include "rvolt/grid.hpp"
#include "rvolt/increment.hpp"
#include "rvolt/rough.hpp"
#include "rvolt/singular.hpp"

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvolt {

enum class Regime { young, singular, rough };

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);

/// Invalid problem data; what() names the violated constraint.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// y_t = a + int_0^t sigma(t, u, y_u) dx_u, in one of three regimes.
/// Singular problems carry their coefficient as a KernelSpec; rough problems need a lift.
struct VolterraProblem {
  Regime regime = Regime::young;
  VectorXd a;
  Coefficient coefficient;
  KernelSpec kernel;
  Path driver;
  std::optional<LevyArea> lift;
  double gamma = 0.0;
  double kappa = 0.0;

  const Grid& grid() const { return driver.grid(); }
  Index state_dim() const { return a.size(); }

  /// Young: gamma in (1/2, 1], kappa in (0, 1], kappa (1 + gamma) > 1.
  /// Singular: the kernel's constraints. Rough: gamma in (1/3, 1/2], kappa in (0, 1],
  /// gamma (kappa + 2) > 1, a lift on the driver's grid and a state derivative.
  void validate() const;

  /// kappa defaults to the midpoint of its admissible interval when NaN.
  static VolterraProblem young(Coefficient sigma, VectorXd a, Path driver, double gamma,
                               double kappa = std::numeric_limits<double>::quiet_NaN());
  static VolterraProblem singular(KernelSpec kernel, VectorXd a, Path driver);
  static VolterraProblem rough(Coefficient sigma, VectorXd a, Path driver, LevyArea lift, double gamma,
                               double kappa = std::numeric_limits<double>::quiet_NaN());

  static double default_young_kappa(double gamma);
  static double default_rough_kappa(double gamma);

 private:
  explicit VolterraProblem(Path d) : driver(std::move(d)) {}
};

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 60;
  /// First window length in grid cells; 0 means N / 4.
  Index initial_window = 0;
  /// Largest window length in grid cells; 0 means N / 2.
  Index max_window = 0;
  double growth = 1.5;
  /// Added to the constant-extension guess on every window (uniqueness experiments).
  double guess_offset = 0.0;
};

/// Default tolerances: smooth drivers and fractional Brownian drivers.
constexpr double kSmoothTolerance = 1e-10;
constexpr double kFbmTolerance = 1e-8;

struct WindowLog {
  Index start = 0;
  Index end = 0;
  int iterations = 0;
  double final_residual = 0.0;
  /// Hölder norm of the solution on the window: gamma (Young, rough) or kappa (singular).
  double holder_norm = 0.0;
  std::vector<double> residuals{};
};

struct SolverReport {
  Regime regime = Regime::young;
  Path solution;
  /// sigma(t, t, y_t) for rough problems.
  std::optional<MatrixPath> yprime{};
  std::vector<WindowLog> windows{};
  bool converged = false;
  /// Last grid index covered by accepted windows; later values repeat y at this index.
  Index solved_index = 0;
  /// Rough only: end of the first window, beyond which continuation is heuristic.
  Index proven_local_until = 0;
  bool heuristic_extension = false;
  /// Window-length halvings caused by non-convergence.
  int rejections = 0;
  double tol = 0.0;
  int max_iter = 0;
  std::string message{};

  double solved_horizon() const { return solution.grid().t(solved_index); }
};

struct PicardResidual {
  double sup = 0.0;
  double holder = 0.0;
};

/// Sup norm of y_new - y_old and its gamma-Hölder norm. Throws on a grid mismatch.
PicardResidual picard_residual(const Path& y_old, const Path& y_new, double gamma);

SolverReport solve_young(const VolterraProblem& p, const SolverOptions& options = {});
SolverReport solve_singular(const VolterraProblem& p, const SolverOptions& options = {});
SolverReport solve_rough(const VolterraProblem& p, const SolverOptions& options = {});
/// Dispatches on p.regime.
SolverReport solve(const VolterraProblem& p, const SolverOptions& options = {});

inline SolverReport solve_young(const VolterraProblem& p, double tol, int max_iter) {
  return solve_young(p, SolverOptions{tol, max_iter});
}
inline SolverReport solve_singular(const VolterraProblem& p, double tol, int max_iter) {
  return solve_singular(p, SolverOptions{tol, max_iter});
}
inline SolverReport solve_rough(const VolterraProblem& p, double tol, int max_iter) {
  return solve_rough(p, SolverOptions{tol, max_iter});
}

}  // namespace rvolt
