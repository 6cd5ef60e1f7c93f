#include "rvolt/singular.hpp"

#include "rvolt/sewing.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace rvolt {

void KernelSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2)");
  if (!(gamma > 0.5 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (1/2, 1)");
  const double beta = gamma - alpha;
  if (!(beta > 0.5)) throw std::invalid_argument("constraint violated: gamma - alpha > 1/2");
  if (!(kappa > 1.0 - beta && kappa < beta)) {
    throw std::invalid_argument("constraint violated: kappa in (1 - (gamma - alpha), gamma - alpha)");
  }
  if (!psi.value) throw std::invalid_argument("kernel needs psi");
}

double KernelSpec::default_kappa(double alpha, double gamma) {
  const double beta = gamma - alpha;
  return 0.5 * ((1.0 - beta) + beta);
}

double kernel_power(double r, double alpha, double scale) {
  if (r < 1e-8 * scale) return std::exp(-alpha * std::log(r));
  return std::pow(r, -alpha);
}

double kernel_increment(double t, double s, double u, double alpha) {
  if (!(u < s) || s > t || u < 0.0) throw std::invalid_argument("kernel_increment needs 0 <= u < s <= t");
  if (t == s) return 0.0;
  return kernel_power(t - u, alpha, t) - kernel_power(s - u, alpha, t);
}

namespace {

void check_inputs(const KernelSpec& k, const Path& y, const Path& x, Index i, Index j) {
  if (!(y.grid() == x.grid())) throw std::invalid_argument("solution and driver must share a grid");
  if (y.dim() != k.psi.d || x.dim() != k.psi.n) throw std::invalid_argument("dimension mismatch with psi");
  if (i < 0 || i > j || j > x.grid().n_steps()) throw std::invalid_argument("index pair out of range");
  if (!(k.alpha >= 0.0 && k.alpha < 1.0)) throw std::invalid_argument("kernel exponent must lie in [0, 1)");
}

// Left-point sums of f(u_k) psi(y_k) dx over [first, first + len) at every dyadic
// level of that range. Only left endpoints are visited, so f is never evaluated at
// the right end.
template <typename F>
DyadicSum dyadic_levels(const KernelSpec& k, const Path& y, const Path& x, Index first, Index len, F&& f) {
  const auto& grid = x.grid();
  const int depth = std::countr_zero(static_cast<std::size_t>(len));
  DyadicSum out;
  for (int n = 0; n <= depth; ++n) {
    const Index h = len >> n;
    CompensatedSum<double> acc(k.psi.d);
    for (Index l = 0; l < (Index(1) << n); ++l) {
      const Index a = first + l * h;
      acc.add(f(grid.t(a)) * (k.psi.value(y[a]) * x.increment(a, a + h)));
    }
    out.levels.push_back(acc.value());
  }
  out.value = out.levels.back();
  if (out.levels.size() > 1) out.last_correction = (out.levels.back() - out.levels[out.levels.size() - 2]).norm();
  return out;
}

}  // namespace

DyadicSum singular_integral_diag(const KernelSpec& k, const Path& y, const Path& x, Index i, Index j) {
  check_inputs(k, y, x, i, j);
  if (j == i || !std::has_single_bit(static_cast<std::size_t>(j - i))) {
    throw std::invalid_argument("diagonal scheme needs j - i to be a positive power of two");
  }
  const double t = x.grid().t(j), scale = x.grid().horizon();
  return dyadic_levels(k, y, x, i, j - i, [&](double u) { return kernel_power(t - u, k.alpha, scale); });
}

DyadicSum singular_integral_offdiag(const KernelSpec& k, const Path& y, const Path& x, Index i, Index j) {
  check_inputs(k, y, x, i, j);
  if (i == 0) return DyadicSum{VectorXd::Zero(k.psi.d), {VectorXd::Zero(k.psi.d)}, 0.0};
  if (!std::has_single_bit(static_cast<std::size_t>(i))) {
    throw std::invalid_argument("off-diagonal scheme needs i to be a power of two");
  }
  const double s = x.grid().t(i), t = x.grid().t(j);
  return dyadic_levels(k, y, x, 0, i, [&](double u) { return kernel_increment(t, s, u, k.alpha); });
}

VectorXd singular_increment(const KernelSpec& k, const Path& y, const Path& x, Index i, Index j) {
  check_inputs(k, y, x, i, j);
  const auto& grid = x.grid();
  const double s = grid.t(i), t = grid.t(j), scale = grid.horizon();
  CompensatedSum<double> acc(k.psi.d);
  if (i == j) return acc.value();
  for (Index m = 0; m < j; ++m) {
    const double u = grid.t(m);
    const double w = m < i ? kernel_increment(t, s, u, k.alpha) : kernel_power(t - u, k.alpha, scale);
    acc.add(w * (k.psi.value(y[m]) * x.increment(m, m + 1)));
  }
  return acc.value();
}

std::vector<double> kernel_weights(const Grid& grid, double alpha) {
  std::vector<double> w(static_cast<std::size_t>(grid.n_points()), 0.0);
  for (Index r = 1; r < grid.n_points(); ++r) w[static_cast<std::size_t>(r)] = kernel_power(grid.t(r), alpha, grid.horizon());
  return w;
}

Path singular_path(const KernelSpec& k, const Path& y, const Path& x) {
  check_inputs(k, y, x, 0, 0);
  const auto& grid = x.grid();
  const Index n = grid.n_points();
  const auto w = kernel_weights(grid, k.alpha);
  Path::Values g(n - 1, k.psi.d);
  for (Index m = 0; m + 1 < n; ++m) g.row(m) = (k.psi.value(y[m]) * x.increment(m, m + 1)).transpose();
  Path::Values z = Path::Values::Zero(n, k.psi.d);
  for (Index m = 1; m < n; ++m) {
    CompensatedSum<double> acc(k.psi.d);
    for (Index q = 0; q < m; ++q) acc.add(w[static_cast<std::size_t>(m - q)] * g.row(q).transpose());
    z.row(m) = acc.value().transpose();
  }
  return Path(grid, std::move(z));
}

Coefficient singular_coefficient(const KernelSpec& k) {
  auto phi = coefficients::ScalarFunction{[a = k.alpha](double r) { return std::pow(r, -a); },
                                          [a = k.alpha](double r) { return -a * std::pow(r, -a - 1.0); }};
  return coefficients::separable(std::move(phi), k.psi, "singular_kernel");
}

}  // namespace rvolt
