#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rvolt/regression.hpp"
#include "rvolt/rough.hpp"
#include "rvolt/young.hpp"

#include <cmath>
#include <random>

using namespace rvolt;

namespace {

Path random_walk(const Grid& grid, Index dim, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Path::Values v = Path::Values::Zero(grid.n_points(), dim);
  for (Index i = 1; i < v.rows(); ++i)
    for (Index c = 0; c < dim; ++c) v(i, c) = v(i - 1, c) + scale * std::sqrt(grid.step()) * normal(rng);
  return Path(grid, v);
}

// y = A sin(x) + B x with y' = A cos(x) + B: controlled by a scalar driver x.
ControlledPath controlled_by(const Path& x, double a, double b, double gamma) {
  const auto& grid = x.grid();
  Path::Values v(grid.n_points(), 1);
  MatrixPath d(grid, 1, 1);
  for (Index k = 0; k < grid.n_points(); ++k) {
    v(k, 0) = a * std::sin(x[k](0)) + b * x[k](0);
    d[k](0, 0) = a * std::cos(x[k](0)) + b;
  }
  return ControlledPath(Path(grid, v), d, x, gamma, 2.0 * gamma);
}

ControlledPath difference(const ControlledPath& p, const ControlledPath& q) {
  MatrixPath d(p.y.grid(), p.yprime.rows(), p.yprime.cols());
  for (Index k = 0; k < p.y.grid().n_points(); ++k) d[k] = p.yprime[k] - q.yprime[k];
  return ControlledPath(Path(p.y.grid(), p.y.values() - q.y.values()), d, p.x, p.gamma, p.eta);
}

ControlledPath with_eta(const ControlledPath& p, double eta) {
  return ControlledPath(p.y, p.yprime, p.x, p.gamma, eta);
}

// Fine midpoint-rule quadrature of int_0^T f(u) g'(u) du.
template <typename F, typename G>
double fine_quadrature(F f, G dg, double horizon) {
  const Index m = 1 << 20;
  const double h = horizon / m;
  double acc = 0.0;
  for (Index k = 0; k < m; ++k) {
    const double u = (k + 0.5) * h;
    acc += f(u) * dg(u) * h;
  }
  return acc;
}

}  // namespace

TEST_CASE("single-cell lift is half the tensor square") {
  Grid grid(1.0, 1);
  Path::Values v(2, 2);
  v << 0.3, -1.0, 1.1, 0.5;
  Path x(grid, v);
  auto xx = LevyArea::piecewise_linear(x);
  const VectorXd dx = x.increment(0, 1);
  CHECK((xx(0, 1) - 0.5 * dx * dx.transpose()).norm() == 0.0);
}

TEST_CASE("lift of (t, t^2) approaches int u d(u^2) = 2/3") {
  for (Index n : {16, 128, 1024}) {
    Grid grid(1.0, n);
    auto x = Path::sample(grid, 2, [](double t) { return VectorXd{{t, t * t}}; });
    auto xx = LevyArea::piecewise_linear(x);
    CHECK(std::abs(xx(0, n)(0, 1) - 2.0 / 3.0) <= 1.0 / static_cast<double>(n));
  }
}

TEST_CASE("Chen relation and symmetric part are exact") {
  std::mt19937_64 rng(61);
  Grid grid(1.0, 16);
  auto x = random_walk(grid, 3, 1.0, rng);
  auto xx = LevyArea::piecewise_linear(x);
  CHECK(chen_defect(xx) <= 1e-13);
  CHECK(symmetry_defect(xx) <= 1e-13);
  CHECK(chen_defect(xx, -1.0) > 1e-3);
}

TEST_CASE("restricted lifts keep Chen's relation") {
  std::mt19937_64 rng(67);
  Grid fine(1.0, 64);
  auto x = random_walk(fine, 2, 1.0, rng);
  auto xx = LevyArea::from_refined(x, 4);
  CHECK(xx.grid().n_steps() == 16);
  CHECK(chen_defect(xx) <= 1e-13);
  CHECK(symmetry_defect(xx) <= 1e-13);
  auto full = LevyArea::piecewise_linear(x);
  CHECK((xx(3, 11) - full(12, 44)).norm() <= 1e-13);
}

TEST_CASE("supplied non-geometric areas are accepted") {
  Grid grid(1.0, 4);
  auto x = Path::sample(grid, 2, [](double t) { return VectorXd{{t, -t}}; });
  std::vector<MatrixXd> cells(4, MatrixXd{{0.0, 0.1}, {-0.1, 0.0}});
  LevyArea xx(x, cells);
  CHECK(chen_defect(xx) <= 1e-15);
  CHECK(symmetry_defect(xx) > 1e-3);
  CHECK_THROWS_AS(LevyArea(x, std::vector<MatrixXd>(3, MatrixXd::Zero(2, 2))), std::invalid_argument);
}

TEST_CASE("constant integrand with zero derivative") {
  Grid grid(1.0, 32);
  auto x = Path::sample(grid, 2, [](double t) { return VectorXd{{std::sin(t), t * t}}; });
  auto xx = LevyArea::piecewise_linear(x);
  const VectorXd c{{2.0, -0.5}};
  ControlledPath z(Path::constant(grid, c), MatrixPath(grid, 2, 2), x, 0.5, 1.0);
  CHECK(rough_integral(z, xx, 3, 30) == doctest::Approx(c.dot(x.increment(3, 30))).epsilon(1e-14));
}

TEST_CASE("a path integrated against itself on one cell") {
  Grid grid(1.0, 8);
  auto x = Path::sample(grid, 1, [](double t) { return VectorXd::Constant(1, std::exp(t)); });
  auto xx = LevyArea::piecewise_linear(x);
  MatrixPath one(grid, std::vector<MatrixXd>(9, MatrixXd::Ones(1, 1)));
  ControlledPath z(x, one, x, 0.5, 1.0);
  const double expected = x[3](0) * x.increment(3, 4)(0) + xx(3, 4)(0, 0);
  CHECK(rough_integral(z, xx, 3, 4) == expected);
}

TEST_CASE("smooth consistency on the trigonometric suite") {
  // int x^a dx^b for x = (sin wt, cos wt), against a fine quadrature oracle.
  const Index n = 1024;
  const double horizon = 1.0;
  for (double w : {1.0, 2.0, 3.0}) {
    Grid grid(horizon, n);
    auto x = Path::sample(grid, 2, [w](double t) { return VectorXd{{std::sin(w * t), std::cos(w * t)}}; });
    auto xx = LevyArea::piecewise_linear(x);
    auto value = [w](int a, double u) { return a == 0 ? std::sin(w * u) : std::cos(w * u); };
    auto slope = [w](int b, double u) { return b == 0 ? w * std::cos(w * u) : -w * std::sin(w * u); };
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        // Row integrand z_b = x^a, so z'(b, a) = 1.
        Path::Values v = Path::Values::Zero(n + 1, 2);
        v.col(b) = x.values().col(a);
        MatrixXd d = MatrixXd::Zero(2, 2);
        d(b, a) = 1.0;
        ControlledPath z(Path(grid, v), MatrixPath(grid, std::vector<MatrixXd>(n + 1, d)), x, 0.5, 1.0);
        const double oracle = fine_quadrature([&](double u) { return value(a, u); }, [&](double u) { return slope(b, u); }, horizon);
        const double got = rough_integral(z, xx, 0, n);
        INFO("w=" << w << " a=" << a << " b=" << b);
        CHECK(std::abs(got - oracle) <= 1e-3 * std::abs(oracle));
      }
  }
}

TEST_CASE("second-order correction vanishes at first order for smooth drivers") {
  std::vector<double> ns, gaps;
  for (Index n : {64, 128, 256, 512, 1024}) {
    Grid grid(1.0, n);
    auto x = Path::sample(grid, 1, [](double t) { return VectorXd::Constant(1, std::sin(2 * t)); });
    auto xx = LevyArea::piecewise_linear(x);
    auto z = controlled_by(x, 1.0, 0.5, 0.5);
    MatrixPath zm(grid, 1, 1);
    for (Index k = 0; k <= n; ++k) zm[k] = z.y[k];
    const double young = young_integral(zm, x, 0, n)(0);
    const double rough = rough_integral(z, xx, 0, n);
    ns.push_back(static_cast<double>(n));
    gaps.push_back(std::abs(rough - young) / std::abs(rough));
  }
  const double slope = fit_rate(ns, gaps).slope;
  CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("composition with the identity and with a constant") {
  std::mt19937_64 rng(71);
  Grid grid(1.0, 64);
  auto x = random_walk(grid, 1, 1.0, rng);
  auto y = controlled_by(x, 0.8, 0.3, 0.4);
  auto id = controlled_compose(coefficients::identity(), 0, 0.7, y);
  for (Index k = 0; k <= 64; ++k) CHECK(id.yprime[k](0, 0) == y.yprime[k](0, 0));
  auto c = controlled_compose(coefficients::constant(MatrixXd::Constant(1, 1, 2.5)), 0, 0.7, y);
  for (Index k = 0; k <= 64; ++k) CHECK(c.yprime[k].norm() == 0.0);
  for (Index i = 0; i <= 64; i += 7)
    for (Index j = i; j <= 64; j += 5) CHECK(c.remainder(i, j).norm() == 0.0);
  auto broken = coefficients::identity();
  broken.d_state = nullptr;
  CHECK_THROWS_AS(controlled_compose(broken, 0, 0.5, y), std::invalid_argument);
}

TEST_CASE("composition norm grows at most quadratically") {
  // One constant fitted on five controlled paths must bound five more (factor 2 slack).
  const double gamma = 0.4;
  auto sigma = coefficients::trigonometric(1, 1, 1.0, 2.0, 0.0);
  std::mt19937_64 rng(73);
  Grid grid(1.0, 128);
  auto x = random_walk(grid, 1, 1.0, rng);
  std::vector<double> ratio;
  for (int trial = 0; trial < 10; ++trial) {
    auto y = controlled_by(x, 0.5 + 0.3 * trial, 0.2 * trial, gamma);
    const double qy = q_norm(y).total;
    const double qz = q_norm(controlled_compose(sigma, 0, 1.0, y)).total;
    ratio.push_back(qz / (1.0 + qy * qy));
  }
  const double fitted = *std::max_element(ratio.begin(), ratio.begin() + 5);
  for (int trial = 5; trial < 10; ++trial) CHECK(ratio[static_cast<std::size_t>(trial)] <= 2.0 * fitted);
}

TEST_CASE("Lipschitz-type estimates of the composed coefficient") {
  const double gamma = 0.4, kappa = 0.6;
  auto sigma = coefficients::trigonometric(1, 1, 0.8, 0.5, 2.0);
  std::mt19937_64 rng(79);
  Grid grid(1.0, 64);
  auto x = random_walk(grid, 1, 1.0, rng);
  auto composed_difference = [&](double t, double s, const ControlledPath& y) {
    return difference(controlled_compose(sigma, 0, t, y), controlled_compose(sigma, 0, s, y));
  };
  std::vector<double> r47, r48, r49;
  for (int trial = 0; trial < 10; ++trial) {
    auto y = controlled_by(x, 0.4 + 0.2 * trial, 0.1 * trial, gamma);
    auto yt = controlled_by(x, 0.3 + 0.25 * trial, 0.1 * trial + 0.05, gamma);
    const double qy = q_norm(y).total, qt = q_norm(yt).total;
    const double qd = q_norm(difference(y, yt)).total;
    for (auto [s, t] : {std::pair{0.1, 0.3}, {0.4, 0.9}, {0.0, 1.0}}) {
      r47.push_back(q_norm(composed_difference(t, s, y)).total / ((t - s) * (1.0 + qy * qy)));
      const double lhs49 =
          q_norm(with_eta(difference(composed_difference(t, s, y), composed_difference(t, s, yt)), gamma + gamma * kappa)).total;
      r49.push_back(lhs49 / ((t - s) * (1.0 + std::pow(qy, 1 + kappa) + std::pow(qt, 1 + kappa)) * qd));
    }
    const double lhs48 = q_norm(difference(controlled_compose(sigma, 0, 0.8, y), controlled_compose(sigma, 0, 0.8, yt))).total;
    r48.push_back(lhs48 / ((1.0 + qy * qy + qt * qt) * qd));
  }
  for (auto* r : {&r47, &r48, &r49}) {
    const std::size_t half = r->size() / 2;
    const double fitted = *std::max_element(r->begin(), r->begin() + static_cast<std::ptrdiff_t>(half));
    for (std::size_t k = half; k < r->size(); ++k) {
      CHECK(std::isfinite((*r)[k]));
      CHECK((*r)[k] <= 2.0 * fitted);
    }
  }
}

TEST_CASE("rough Volterra increment pieces") {
  Grid grid(1.0, 64);
  auto x = Path::sample(grid, 1, [](double t) { return VectorXd::Constant(1, std::sin(3 * t)); });
  auto xx = LevyArea::piecewise_linear(x);
  auto y = controlled_by(x, 0.7, 0.2, 0.4);

  SUBCASE("no running-time dependence") {
    auto sigma = coefficients::trigonometric(1, 1, 1.0, 2.0, 0.0);
    auto inc = volterra_remainder_rough(sigma, y, xx, 20, 45, true);
    CHECK(inc.r21(0) == 0.0);
    CHECK(inc.r22(0) == 0.0);
    CHECK(inc.r0(0) == 0.0);
    CHECK(std::abs(inc.gubinelli(0) + inc.remainder()(0) - inc.total(0)) <= 1e-14);
    CHECK(std::abs(inc.r12(0) - inc.r12_lambda(0)) <= 1e-13);
  }
  SUBCASE("running-time dependence") {
    auto sigma = coefficients::trigonometric(1, 1, 0.9, 0.5, 2.0);
    auto inc = volterra_remainder_rough(sigma, y, xx, 20, 45, true);
    CHECK(inc.r21.norm() > 0.0);
    CHECK(std::abs(inc.gubinelli(0) + inc.remainder()(0) - inc.total(0)) <= 1e-13);
    CHECK(std::abs(inc.r12(0) - inc.r12_lambda(0)) <= 1e-13);
    CHECK(std::abs(inc.r22(0) - inc.r22_lambda(0)) <= 1e-13);
    // Increments telescope: z_45 - z_0 = (z_45 - z_20) + (z_20 - z_0).
    const double whole = volterra_remainder_rough(sigma, y, xx, 0, 45).total(0);
    const double head = volterra_remainder_rough(sigma, y, xx, 0, 20).total(0);
    CHECK(std::abs(whole - head - inc.total(0)) <= 1e-13);
  }
  SUBCASE("debug mode is limited to small grids") {
    Grid big(1.0, 512);
    auto xb = Path::sample(big, 1, [](double t) { return VectorXd::Constant(1, t); });
    auto yb = controlled_by(xb, 1.0, 0.0, 0.4);
    CHECK_THROWS_AS(volterra_remainder_rough(coefficients::identity(), yb, LevyArea::piecewise_linear(xb), 0, 4, true),
                    std::invalid_argument);
  }
}

TEST_CASE("remainder of the Volterra increment is 2 gamma regular under refinement") {
  const double gamma = 0.45;
  auto sigma = coefficients::trigonometric(1, 1, 0.9, 0.5, 2.0);
  std::vector<double> norms;
  for (Index n : {16, 32, 64}) {
    Grid grid(1.0, n);
    auto x = Path::sample(grid, 1, [](double t) { return VectorXd::Constant(1, std::sin(3 * t)); });
    auto xx = LevyArea::piecewise_linear(x);
    auto y = controlled_by(x, 0.7, 0.2, gamma);
    Increment2 r(grid, 1, [&](Index i, Index j) { return volterra_remainder_rough(sigma, y, xx, i, j).remainder(); });
    norms.push_back(holder_norm(r, 2 * gamma).value);
  }
  for (double v : norms) CHECK(std::isfinite(v));
  CHECK(norms[2] <= 1.5 * norms[0]);
  CHECK(norms[1] <= 1.5 * norms[0]);
}
