#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rvolt/regression.hpp"
#include "rvolt/singular.hpp"
#include "rvolt/young.hpp"

#include <cmath>
#include <random>

using namespace rvolt;

namespace {

Path scalar_path(const Grid& grid, double (*f)(double)) {
  return Path::sample(grid, 1, [f](double t) { return VectorXd::Constant(1, f(t)); });
}

KernelSpec unit_kernel(double alpha, double gamma = 0.95, double kappa = 0.5) {
  return KernelSpec{alpha, coefficients::constant_state(MatrixXd::Ones(1, 1)), gamma, kappa};
}

KernelSpec sine_kernel(double alpha) {
  return KernelSpec{alpha, coefficients::sine_state(1, 1, 0.5, 1.0), 0.95, 0.5};
}

Path random_state(const Grid& grid, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Path::Values v(grid.n_points(), 1);
  v(0, 0) = 0.0;
  for (Index i = 1; i < v.rows(); ++i) v(i, 0) = v(i - 1, 0) + scale * std::sqrt(grid.step()) * normal(rng);
  return Path(grid, v);
}

}  // namespace

TEST_CASE("kernel increment examples") {
  CHECK(kernel_increment(1.1, 1.0, 0.0, 0.5) == doctest::Approx(std::pow(1.1, -0.5) - 1.0).epsilon(1e-15));
  CHECK(kernel_increment(1.1, 1.0, 0.0, 0.5) == doctest::Approx(-0.04653).epsilon(1e-4));
  CHECK(kernel_increment(1.0, 1.0, 0.2, 0.3) == 0.0);
  CHECK_THROWS_AS(kernel_increment(1.0, 0.5, 0.5, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(kernel_increment(0.4, 0.5, 0.1, 0.3), std::invalid_argument);
}

TEST_CASE("kernel increment is nonpositive and obeys the power bound") {
  // By the mean value theorem |f| <= (s-u)^{-alpha} min(1, alpha r), r = (t-s)/(s-u),
  // and min(1, alpha r) <= (alpha r)^beta, so c_beta = alpha^beta for beta in [0, 1].
  const double alpha = 0.3, gamma = 0.9, kappa = 0.5;
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double beta : {kappa, gamma - alpha, 1.0}) {
    const double c_beta = std::pow(alpha, beta);
    double worst = 0.0;
    for (int n = 0; n < 2000; ++n) {
      const double u = unif(rng), s = u + 1e-6 + unif(rng), t = s + 1e-6 + 2.0 * unif(rng) * unif(rng);
      const double v = kernel_increment(t, s, u, alpha);
      CHECK(v <= 0.0);
      worst = std::max(worst, std::abs(v) / (std::pow(s - u, -alpha - beta) * std::pow(t - s, beta)));
    }
    CHECK(worst <= c_beta * (1.0 + 1e-12));
  }
}

TEST_CASE("log-space kernel evaluation agrees with pow") {
  CHECK(kernel_power(1e-12, 0.3, 1.0) == doctest::Approx(std::pow(1e-12, -0.3)).epsilon(1e-13));
  CHECK(kernel_power(0.5, 0.3, 1.0) == std::pow(0.5, -0.3));
}

TEST_CASE("exponent validation names the violated constraint") {
  auto k = unit_kernel(0.25, 0.95, 0.5);
  CHECK_NOTHROW(k.validate());
  k.gamma = 0.7;
  k.alpha = 0.3;
  CHECK_THROWS_WITH_AS(k.validate(), doctest::Contains("gamma - alpha > 1/2"), std::invalid_argument);
  k = unit_kernel(0.25, 0.95, 0.2);
  CHECK_THROWS_WITH_AS(k.validate(), doctest::Contains("kappa"), std::invalid_argument);
  CHECK(KernelSpec::default_kappa(0.25, 0.95) == 0.5);
}

TEST_CASE("diagonal scheme against the analytic power integral") {
  // int_0^1 (1-u)^{-1/2} du = 2. The left-point sum equals N^{-1/2} sum_{r<=N} r^{-1/2},
  // which differs from 2 by about zeta(1/2) N^{-1/2}.
  const Index n = 4096;
  Grid grid(1.0, n);
  auto x = scalar_path(grid, [](double t) { return t; });
  auto y = Path::constant(grid, VectorXd::Zero(1));
  auto r = singular_integral_diag(unit_kernel(0.5), y, x, 0, n);
  CHECK(std::abs(r.value(0) - 2.0) <= 1.5 / std::sqrt(static_cast<double>(n)));
  CHECK(r.levels.size() == 13);
  for (std::size_t l = 1; l < r.levels.size(); ++l) {
    CHECK(std::abs(r.levels[l](0) - 2.0) < std::abs(r.levels[l - 1](0) - 2.0));
  }
  CHECK(r.last_correction == doctest::Approx(std::abs(r.levels[12](0) - r.levels[11](0))));
}

TEST_CASE("diagonal scheme with alpha = 0 is the Young integral") {
  Grid grid(1.0, 64);
  auto x = scalar_path(grid, [](double t) { return std::sin(3 * t); });
  auto y = scalar_path(grid, [](double t) { return std::cos(t); });
  auto k = sine_kernel(0.0);
  MatrixPath z(grid, 1, 1);
  for (Index m = 0; m <= 64; ++m) z[m] = k.psi.value(y[m]);
  CHECK(singular_integral_diag(k, y, x, 16, 48).value(0) == young_integral(z, x, 16, 48)(0));
}

TEST_CASE("constant driver gives zero") {
  Grid grid(1.0, 32);
  auto x = Path::constant(grid, VectorXd::Constant(1, 2.0));
  auto y = scalar_path(grid, [](double t) { return t; });
  CHECK(singular_integral_diag(sine_kernel(0.3), y, x, 0, 32).value(0) == 0.0);
  CHECK(singular_integral_offdiag(sine_kernel(0.3), y, x, 16, 32).value(0) == 0.0);
}

TEST_CASE("non-dyadic ranges are rejected") {
  Grid grid(1.0, 32);
  auto x = scalar_path(grid, [](double t) { return t; });
  CHECK_THROWS_AS(singular_integral_diag(unit_kernel(0.3), x, x, 0, 12), std::invalid_argument);
  CHECK_THROWS_AS(singular_integral_offdiag(unit_kernel(0.3), x, x, 12, 20), std::invalid_argument);
}

TEST_CASE("off-diagonal scheme") {
  const Index n = 4096;
  Grid grid(1.0, n);
  auto x = scalar_path(grid, [](double t) { return t; });
  auto y = Path::constant(grid, VectorXd::Zero(1));
  CHECK(singular_integral_offdiag(unit_kernel(0.5), y, x, 0, n).value(0) == 0.0);
  // int_0^s [(t-u)^{-a} - (s-u)^{-a}] du = (t^{1-a} - s^{1-a} - (t-s)^{1-a}) / (1-a),
  // negative because the kernel increment is.
  const double expected = (1.0 - std::sqrt(0.5) - std::sqrt(0.5)) * 2.0;
  CHECK(expected == doctest::Approx(-0.82843).epsilon(1e-5));
  auto r = singular_integral_offdiag(unit_kernel(0.5), y, x, n / 2, n);
  CHECK(std::abs(r.value(0) - expected) <= 1.5 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("off-diagonal level corrections decay at the predicted rate") {
  // gamma = 0.999, alpha = 0.1, kappa = 0.15: benchmark gamma - alpha - kappa = 0.749.
  const double alpha = 0.1, gamma = 0.999, kappa = 0.15;
  const Index n = 1 << 14;
  Grid grid(1.0, n);
  auto x = scalar_path(grid, [](double t) { return t; });
  auto y = Path::constant(grid, VectorXd::Zero(1));
  KernelSpec k = unit_kernel(alpha, gamma, kappa);
  CHECK_NOTHROW(k.validate());
  auto r = singular_integral_offdiag(k, y, x, n / 2, n);
  std::vector<double> level, size;
  for (std::size_t l = 4; l < r.levels.size(); ++l) {
    level.push_back(static_cast<double>(l) * std::log(2.0));
    size.push_back(-std::log(std::abs(r.levels[l](0) - r.levels[l - 1](0))));
  }
  const double slope = fit_line(level, size).slope;
  const double benchmark = gamma - alpha - kappa;
  INFO("fitted " << slope << " benchmark " << benchmark);
  CHECK(std::abs(slope - benchmark) <= 0.25 * benchmark);
}

TEST_CASE("dyadic corrections are geometric for a smooth driver") {
  const double alpha = 0.25, gamma = 0.95, kappa = 0.5;
  const Index n = 1 << 12;
  Grid grid(1.0, n);
  auto x = scalar_path(grid, [](double t) { return std::sin(2 * t); });
  auto y = scalar_path(grid, [](double t) { return t * t; });
  auto r = singular_integral_diag(sine_kernel(alpha), y, x, 0, n);
  const double bound = std::pow(2.0, -std::min(gamma - alpha - kappa, kappa + gamma - 1.0)) + 0.1;
  for (std::size_t l = 6; l + 1 < r.levels.size(); ++l) {
    const double ratio = (r.levels[l + 1] - r.levels[l]).norm() / (r.levels[l] - r.levels[l - 1]).norm();
    CHECK(ratio <= bound);
  }
}

TEST_CASE("increment is the sum of the two schemes") {
  Grid grid(1.0, 256);
  auto x = scalar_path(grid, [](double t) { return std::sin(5 * t); });
  auto y = scalar_path(grid, [](double t) { return std::cos(2 * t); });
  auto k = sine_kernel(0.3);
  for (auto [i, j] : {std::pair<Index, Index>{64, 128}, {128, 256}, {32, 64}, {0, 256}}) {
    const VectorXd parts = singular_integral_diag(k, y, x, i, j).value + singular_integral_offdiag(k, y, x, i, j).value;
    const VectorXd whole = singular_increment(k, y, x, i, j);
    CHECK((parts - whole).norm() <= 1e-13);
  }
  auto z = singular_path(k, y, x);
  for (auto [i, j] : {std::pair<Index, Index>{0, 256}, {17, 200}, {100, 101}}) {
    CHECK(std::abs(z[j](0) - z[i](0) - singular_increment(k, y, x, i, j)(0)) <= 1e-13);
  }
}

TEST_CASE("full map for the unit kernel") {
  const double alpha = 0.25;
  const Index n = 4096;
  Grid grid(1.0, n);
  auto x = scalar_path(grid, [](double t) { return t; });
  auto y = Path::constant(grid, VectorXd::Zero(1));
  auto k = unit_kernel(alpha);
  for (auto [i, j] : {std::pair<Index, Index>{1024, 4096}, {2048, 3072}, {0, 4096}}) {
    const double s = grid.t(i), t = grid.t(j);
    const double exact = (std::pow(t, 1 - alpha) - std::pow(s, 1 - alpha)) / (1 - alpha);
    CHECK(std::abs(singular_increment(k, y, x, i, j)(0) - exact) <= 2e-3 * exact);
  }
}

TEST_CASE("grid doubling self-convergence of the full map") {
  auto k = sine_kernel(0.25);
  std::vector<double> values;
  for (Index n : {512, 1024, 2048, 4096}) {
    Grid grid(1.0, n);
    auto x = scalar_path(grid, [](double t) { return std::sin(2 * t); });
    auto y = scalar_path(grid, [](double t) { return std::cos(t); });
    values.push_back(singular_increment(k, y, x, 0, n)(0));
  }
  const double d1 = std::abs(values[1] - values[0]), d2 = std::abs(values[2] - values[1]),
               d3 = std::abs(values[3] - values[2]);
  CHECK(d2 < d1);
  CHECK(d3 < d2);
}

TEST_CASE("solution norm ratio stays bounded under refinement") {
  const double kappa = 0.5, alpha = 0.25;
  auto k = sine_kernel(alpha);
  std::vector<double> worst;
  for (Index n : {256, 1024}) {
    std::mt19937_64 rng(53);
    Grid grid(1.0, n);
    auto x = scalar_path(grid, [](double t) { return std::sin(2 * t); });
    double w = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      auto y = random_state(grid, 0.5 + trial, rng);
      auto z = singular_path(k, y, x);
      const double ratio = holder_norm(z, kappa).value / (1.0 + holder_norm(y, kappa).value);
      CHECK(std::isfinite(ratio));
      w = std::max(w, ratio);
    }
    // T0 = 1, so the factor T0^{gamma - alpha - kappa} is one.
    worst.push_back(w);
  }
  CHECK(worst[1] <= 1.5 * worst[0]);
}

TEST_CASE("integration by parts for smooth paths") {
  const Index n = 1024;
  Grid grid(1.0, n);
  // The discrete defect is sum h df dg = O(1/N).
  auto f = scalar_path(grid, [](double t) { return std::exp(t); });
  auto g = scalar_path(grid, [](double t) { return std::sin(t); });
  auto h = scalar_path(grid, [](double t) { return 1.0 + t; });
  auto matrix = [&](const Path& p) {
    MatrixPath m(grid, 1, 1);
    for (Index i = 0; i <= n; ++i) m[i] = p[i];
    return m;
  };
  const double lhs = young_integral(matrix(h), pointwise_product(f, g), 0, n)(0);
  const double rhs = young_integral(matrix(pointwise_product(g, h)), f, 0, n)(0) +
                     young_integral(matrix(pointwise_product(f, h)), g, 0, n)(0);
  CHECK(std::abs(lhs - rhs) <= 1e-3 * std::abs(lhs));
}

TEST_CASE("epsilon truncation converges to the diagonal scheme") {
  const Index n = 4096;
  Grid grid(1.0, n);
  auto x = scalar_path(grid, [](double t) { return t; });
  auto y = scalar_path(grid, [](double t) { return t; });
  auto k = sine_kernel(0.3);
  const Index i = 1024, j = 3072;
  const double target = singular_integral_diag(k, y, x, i, j).value(0);
  auto z = compose_coeff(singular_coefficient(k), grid.t(j), y);
  double previous = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= 11; ++m) {
    const Index cut = (j - i) >> m;
    const double err = std::abs(young_integral(z, x, i, j - cut)(0) - target);
    CHECK(err < previous);
    previous = err;
  }
}
