#include "rvolt/rough.hpp"

#include "rvolt/sewing.hpp"

#include <stdexcept>

namespace rvolt {

LevyArea::LevyArea(Path x, std::vector<MatrixXd> cells) : x_(std::move(x)), cells_(std::move(cells)) {
  if (static_cast<Index>(cells_.size()) != x_.grid().n_steps()) {
    throw std::invalid_argument("Levy area needs one matrix per grid cell");
  }
  for (const auto& c : cells_) {
    if (c.rows() != x_.dim() || c.cols() != x_.dim()) throw std::invalid_argument("Levy area cells must be n x n");
    if (!c.allFinite()) throw std::invalid_argument("Levy area cells must be finite");
  }
}

LevyArea LevyArea::piecewise_linear(const Path& x) {
  std::vector<MatrixXd> cells;
  cells.reserve(static_cast<std::size_t>(x.grid().n_steps()));
  for (Index k = 0; k < x.grid().n_steps(); ++k) {
    const VectorXd dx = x.increment(k, k + 1);
    cells.emplace_back(0.5 * dx * dx.transpose());
  }
  return LevyArea(x, std::move(cells));
}

LevyArea LevyArea::from_refined(const Path& fine, Index factor) {
  return piecewise_linear(fine).restricted(factor);
}

MatrixXd LevyArea::operator()(Index i, Index j) const {
  if (i < 0 || i > j || j > grid().n_steps()) throw std::invalid_argument("index pair out of range");
  MatrixXd area = MatrixXd::Zero(dim(), dim());
  VectorXd dx = VectorXd::Zero(dim());  // x_k - x_i
  for (Index k = i; k < j; ++k) {
    const VectorXd step = x_.increment(k, k + 1);
    area += cell(k);
    area.noalias() += dx * step.transpose();
    dx += step;
  }
  return area;
}

LevyArea LevyArea::restricted(Index factor) const {
  Path coarse = x_.restricted(factor);
  std::vector<MatrixXd> cells;
  cells.reserve(static_cast<std::size_t>(coarse.grid().n_steps()));
  for (Index k = 0; k < coarse.grid().n_steps(); ++k) cells.push_back((*this)(k * factor, (k + 1) * factor));
  return LevyArea(std::move(coarse), std::move(cells));
}

double chen_defect(const LevyArea& xx, double cross_sign) {
  const Index n = xx.grid().n_points();
  std::vector<MatrixXd> pair(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) pair[static_cast<std::size_t>(i * n + j)] = xx(i, j);
  const auto& x = xx.path();
  double worst = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      for (Index k = j + 1; k < n; ++k) {
        const MatrixXd rebuilt = pair[static_cast<std::size_t>(i * n + j)] + pair[static_cast<std::size_t>(j * n + k)] +
                                 cross_sign * x.increment(i, j) * x.increment(j, k).transpose();
        worst = std::max(worst, (pair[static_cast<std::size_t>(i * n + k)] - rebuilt).cwiseAbs().maxCoeff());
      }
  return worst;
}

double symmetry_defect(const LevyArea& xx) {
  const Index n = xx.grid().n_points();
  const auto& x = xx.path();
  double worst = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const MatrixXd a = xx(i, j);
      const VectorXd dx = x.increment(i, j);
      worst = std::max(worst, (a + a.transpose() - dx * dx.transpose()).cwiseAbs().maxCoeff());
    }
  return worst;
}

ControlledPath::ControlledPath(Path y_, MatrixPath yprime_, Path x_, double gamma_, double eta_)
    : y(std::move(y_)), yprime(std::move(yprime_)), x(std::move(x_)), gamma(gamma_), eta(eta_) {
  if (!(y.grid() == x.grid()) || !(yprime.grid() == x.grid())) {
    throw std::invalid_argument("controlled path components must share a grid");
  }
  if (yprime.rows() != y.dim() || yprime.cols() != x.dim()) {
    throw std::invalid_argument("Gubinelli derivative must be dim(y) x dim(x)");
  }
  if (!(eta > gamma) || !(gamma > 0.0)) throw std::invalid_argument("controlled path needs 0 < gamma < eta");
}

VectorXd ControlledPath::remainder(Index i, Index j) const {
  return y.increment(i, j) - yprime[i] * x.increment(i, j);
}

Increment2 ControlledPath::remainder_increment() const {
  return Increment2(y.grid(), y.dim(), [self = *this](Index i, Index j) { return self.remainder(i, j); });
}

QNorm q_norm(const ControlledPath& y) {
  QNorm q;
  q.y_holder = holder_norm(y.y, y.gamma).value;
  q.yprime_sup = sup_norm(y.yprime);
  q.yprime_holder = holder_norm(y.yprime, y.eta - y.gamma).value;
  q.remainder_holder = holder_norm(y.remainder_increment(), y.eta).value;
  q.total = q.y_holder + q.yprime_sup + q.yprime_holder + q.remainder_holder;
  return q;
}

namespace {

void check_integrand(const ControlledPath& z, const LevyArea& xx, Index i, Index j) {
  if (!(z.x.grid() == xx.grid())) throw std::invalid_argument("integrand and lift must share a grid");
  if (z.y.dim() != xx.dim() || z.yprime.rows() != xx.dim() || z.yprime.cols() != xx.dim()) {
    throw std::invalid_argument("row integrand must have the driver's dimension");
  }
  if (i < 0 || i > j || j > xx.grid().n_steps()) throw std::invalid_argument("index pair out of range");
}

// sum_k D_y sigma[k] * (y' A).row(k)^T, i.e. row-wise sum_{a,b} M_i(b, a) A(a, b).
VectorXd contract(const std::vector<MatrixXd>& d_state, const MatrixXd& yprime, const MatrixXd& area) {
  const MatrixXd p = yprime * area;
  VectorXd out = VectorXd::Zero(d_state.front().rows());
  for (std::size_t k = 0; k < d_state.size(); ++k) out.noalias() += d_state[k] * p.row(static_cast<Index>(k)).transpose();
  return out;
}

}  // namespace

double rough_integral(const ControlledPath& z, const LevyArea& xx, Index i, Index j) {
  check_integrand(z, xx, i, j);
  CompensatedSum<double> acc(1);
  const auto& x = xx.path();
  for (Index k = i; k < j; ++k) {
    const double first = z.y[k].dot(x.increment(k, k + 1));
    const double second = (z.yprime[k] * xx.cell(k)).trace();
    acc.add(VectorXd::Constant(1, first + second));
  }
  return acc.value()(0);
}

VectorXd rough_integral(const std::vector<ControlledPath>& rows, const LevyArea& xx, Index i, Index j) {
  VectorXd out(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out(static_cast<Index>(r)) = rough_integral(rows[r], xx, i, j);
  return out;
}

ControlledPath controlled_compose(const Coefficient& sigma, Index row, double t, const ControlledPath& y) {
  if (!sigma.d_state) throw std::invalid_argument("composition needs the state derivative of the coefficient");
  if (y.y.dim() != sigma.state_dim || y.x.dim() != sigma.noise_dim) {
    throw std::invalid_argument("controlled path does not match the coefficient's dimensions");
  }
  if (row < 0 || row >= sigma.state_dim) throw std::invalid_argument("row out of range");
  const auto& grid = y.y.grid();
  const Index n = sigma.noise_dim;
  Path::Values v(grid.n_points(), n);
  MatrixPath d(grid, n, n);
  for (Index k = 0; k < grid.n_points(); ++k) {
    const double u = grid.t(k);
    v.row(k) = sigma(t, u, y.y[k]).row(row);
    d[k] = state_derivative_row(sigma.d_state(t, u, y.y[k]), row, y.yprime[k]);
  }
  return ControlledPath(Path(grid, std::move(v)), std::move(d), y.x, y.gamma, y.eta);
}

VectorXd rough_germ(const Coefficient& sigma, double t, double u, const VectorXd& y, const MatrixXd& yprime,
                    const VectorXd& dx, const MatrixXd& area) {
  return sigma(t, u, y) * dx + contract(sigma.d_state(t, u, y), yprime, area);
}

RoughIncrement volterra_remainder_rough(const Coefficient& sigma, const ControlledPath& y, const LevyArea& xx,
                                        Index i, Index j, bool debug) {
  if (!sigma.d_state) throw std::invalid_argument("rough increments need the state derivative of the coefficient");
  if (!(y.x.grid() == xx.grid())) throw std::invalid_argument("controlled path and lift must share a grid");
  if (y.y.dim() != sigma.state_dim || xx.dim() != sigma.noise_dim) throw std::invalid_argument("dimension mismatch");
  if (i < 0 || i > j || j > xx.grid().n_steps()) throw std::invalid_argument("index pair out of range");
  const auto& grid = xx.grid();
  const auto& x = xx.path();
  const Index d = sigma.state_dim;
  const double s = grid.t(i), t = grid.t(j);

  auto germ = [&](double running, Index a, Index b) {
    return rough_germ(sigma, running, grid.t(a), y.y[a], y.yprime[a], x.increment(a, b), xx(a, b));
  };

  RoughIncrement out;
  const VectorXd dx = x.increment(i, j);
  const MatrixXd area = xx(i, j);
  out.gubinelli = sigma(s, s, y.y[i]) * dx;
  out.r0 = (sigma(t, s, y.y[i]) - sigma(s, s, y.y[i])) * dx;
  out.r11 = i == j ? VectorXd::Zero(d) : contract(sigma.d_state(t, s, y.y[i]), y.yprime[i], area);

  CompensatedSum<double> current(d);
  for (Index k = i; k < j; ++k) current.add(germ(t, k, k + 1));
  out.r12 = current.value() - out.gubinelli - out.r0 - out.r11;

  const bool past = sigma.depends_on_time && i > 0 && i != j;
  if (past) {
    out.r21 = germ(t, 0, i) - germ(s, 0, i);
    CompensatedSum<double> acc(d);
    for (Index k = 0; k < i; ++k) acc.add(germ(t, k, k + 1) - germ(s, k, k + 1));
    out.r22 = acc.value() - out.r21;
  } else {
    out.r21 = VectorXd::Zero(d);
    out.r22 = VectorXd::Zero(d);
  }
  out.total = current.value() + out.r21 + out.r22;

  if (debug) {
    if (grid.n_steps() > kRoughDebugMaxSteps) {
      throw std::invalid_argument("debug decomposition is limited to N <= 256");
    }
    Increment2 g_t(grid, d, [&, t](Index a, Index b) { return germ(t, a, b); });
    out.r12_lambda = -lambda_of(g_t, 3.0 * y.gamma)(i, j);
    Increment2 g_diff(grid, d, [&, s, t](Index a, Index b) { return VectorXd(germ(t, a, b) - germ(s, a, b)); });
    out.r22_lambda = past ? VectorXd(-lambda_of(g_diff, 3.0 * y.gamma)(0, i)) : VectorXd::Zero(d);
  }
  return out;
}

}  // namespace rvolt
