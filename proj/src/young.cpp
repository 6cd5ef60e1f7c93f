#include "rvolt/young.hpp"

#include "rvolt/sewing.hpp"

#include <stdexcept>

namespace rvolt {

namespace {

void check_shapes(Index cols, const Path& x, const Grid& grid) {
  if (cols != x.dim()) {
    throw std::invalid_argument("integrand has " + std::to_string(cols) + " columns but the driver has dimension " +
                                std::to_string(x.dim()));
  }
  if (!(grid == x.grid())) throw std::invalid_argument("integrand and driver must share a grid");
}

void check_range(Index i, Index j, const Grid& grid) {
  if (i < 0 || i > j || j > grid.n_steps()) throw std::invalid_argument("index pair out of range");
}

}  // namespace

VectorXd young_integral(const MatrixPath& z, const Path& x, Index i, Index j) {
  check_shapes(z.cols(), x, z.grid());
  check_range(i, j, x.grid());
  CompensatedSum<double> acc(z.rows());
  for (Index k = i; k < j; ++k) acc.add(z[k] * x.increment(k, k + 1));
  return acc.value();
}

Increment2 young_germ(const MatrixPath& z, const Path& x) {
  check_shapes(z.cols(), x, z.grid());
  return left_product(z, delta1(x));
}

YoungIntegrand compose_coeff(const Coefficient& sigma, double t, const Path& y, double gamma) {
  if (y.dim() != sigma.state_dim) throw std::invalid_argument("state dimension does not match the coefficient");
  const auto& grid = y.grid();
  MatrixPath z(grid, sigma.state_dim, sigma.noise_dim);
  for (Index k = 0; k < grid.n_points(); ++k) z[k] = sigma(t, grid.t(k), y[k]);
  YoungIntegrand out{std::move(z), gamma > 0.0 ? gamma : 1.0, {}};
  if (gamma > 0.0) out.norm = holder_norm(out.z, gamma);
  return out;
}

VolterraIncrement volterra_increment_young(const Coefficient& sigma, const Path& y, const Path& x, Index i,
                                           Index j) {
  check_range(i, j, x.grid());
  if (!(y.grid() == x.grid())) throw std::invalid_argument("solution and driver must share a grid");
  if (sigma.noise_dim != x.dim()) throw std::invalid_argument("driver dimension does not match the coefficient");
  const auto& grid = x.grid();
  const double s = grid.t(i), t = grid.t(j);
  CompensatedSum<double> current(sigma.state_dim), past(sigma.state_dim);
  for (Index k = i; k < j; ++k) current.add(sigma(t, grid.t(k), y[k]) * x.increment(k, k + 1));
  if (sigma.depends_on_time && i != j) {
    for (Index k = 0; k < i; ++k) {
      const double u = grid.t(k);
      past.add((sigma(t, u, y[k]) - sigma(s, u, y[k])) * x.increment(k, k + 1));
    }
  }
  VolterraIncrement out{current.value(), past.value(), {}};
  out.total = out.current + out.past;
  return out;
}

Path volterra_path_young(const Coefficient& sigma, const Path& y, const Path& x) {
  if (!(y.grid() == x.grid())) throw std::invalid_argument("solution and driver must share a grid");
  const auto& grid = x.grid();
  Path::Values v = Path::Values::Zero(grid.n_points(), sigma.state_dim);
  for (Index m = 1; m < grid.n_points(); ++m) {
    CompensatedSum<double> acc(sigma.state_dim);
    const double t = grid.t(m);
    for (Index k = 0; k < m; ++k) acc.add(sigma(t, grid.t(k), y[k]) * x.increment(k, k + 1));
    v.row(m) = acc.value().transpose();
  }
  return Path(grid, std::move(v));
}

}  // namespace rvolt
