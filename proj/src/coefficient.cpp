#include "rvolt/coefficient.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace rvolt {

namespace {

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

constexpr std::array<int, 12> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

void compare(const MatrixXd& analytic, const MatrixXd& numeric, const std::string& label, double tol,
             DerivativeCheck& out) {
  const double err = (analytic - numeric).norm() / std::max(numeric.norm(), 1.0);
  if (err > out.worst_relative_error) {
    out.worst_relative_error = err;
    out.worst_component = label;
  }
  if (err > tol) out.passed = false;
}

}  // namespace

DerivativeCheck check_derivatives(const Coefficient& sigma, double horizon, double state_radius,
                                  double tolerance) {
  const Index d = sigma.state_dim;
  if (static_cast<std::size_t>(d + 2) > kPrimes.size()) {
    throw std::invalid_argument("derivative probing supports state dimension <= 10");
  }
  constexpr double h = 1e-5;
  constexpr int kProbes = 16;
  DerivativeCheck out;
  for (int p = 1; p <= kProbes; ++p) {
    const double t = horizon * halton(p, kPrimes[0]);
    const double u = horizon * halton(p, kPrimes[1]);
    VectorXd y(d);
    for (Index k = 0; k < d; ++k) {
      y(k) = state_radius * (2.0 * halton(p, kPrimes[static_cast<std::size_t>(k + 2)]) - 1.0);
    }
    if (sigma.d_time) {
      compare(sigma.d_time(t, u, y), (sigma.eval(t + h, u, y) - sigma.eval(t - h, u, y)) / (2 * h), "d_time",
              tolerance, out);
    }
    if (sigma.d_inner) {
      compare(sigma.d_inner(t, u, y), (sigma.eval(t, u + h, y) - sigma.eval(t, u - h, y)) / (2 * h),
              "d_inner", tolerance, out);
    }
    if (sigma.d_state) {
      const auto grad = sigma.d_state(t, u, y);
      if (static_cast<Index>(grad.size()) != d) {
        throw std::invalid_argument("d_state must return one matrix per state component");
      }
      for (Index k = 0; k < d; ++k) {
        VectorXd yp = y, ym = y;
        yp(k) += h;
        ym(k) -= h;
        compare(grad[static_cast<std::size_t>(k)], (sigma.eval(t, u, yp) - sigma.eval(t, u, ym)) / (2 * h),
                "d_state[" + std::to_string(k) + "]", tolerance, out);
      }
    }
  }
  return out;
}

MatrixXd state_derivative_row(const std::vector<MatrixXd>& d_state, Index row, const MatrixXd& yprime) {
  const Index d = static_cast<Index>(d_state.size());
  const Index n = yprime.cols();
  MatrixXd m = MatrixXd::Zero(n, n);
  for (Index k = 0; k < d; ++k) {
    // column vector over b of d sigma_{row,b} / d y_k, times row k of yprime
    m.noalias() += d_state[static_cast<std::size_t>(k)].row(row).transpose() * yprime.row(k);
  }
  return m;
}

namespace coefficients {

Coefficient zero(Index d, Index n) {
  Coefficient c = constant(MatrixXd::Zero(d, n));
  c.name = "zero";
  return c;
}

Coefficient constant(MatrixXd value) {
  Coefficient c;
  c.name = "constant";
  c.state_dim = value.rows();
  c.noise_dim = value.cols();
  c.depends_on_time = false;
  const Index d = value.rows(), n = value.cols();
  c.eval = [value](double, double, const VectorXd&) { return value; };
  c.d_time = [d, n](double, double, const VectorXd&) { return MatrixXd(MatrixXd::Zero(d, n)); };
  c.d_inner = c.d_time;
  c.d_state = [d, n](double, double, const VectorXd&) {
    return std::vector<MatrixXd>(static_cast<std::size_t>(d), MatrixXd::Zero(d, n));
  };
  return c;
}

Coefficient linear(std::vector<MatrixXd> slopes, MatrixXd offset) {
  const Index d = offset.rows(), n = offset.cols();
  if (static_cast<Index>(slopes.size()) != d) throw std::invalid_argument("linear coefficient needs d slopes");
  for (const auto& s : slopes) {
    if (s.rows() != d || s.cols() != n) throw std::invalid_argument("linear coefficient slope shape");
  }
  Coefficient c;
  c.name = "linear";
  c.state_dim = d;
  c.noise_dim = n;
  c.depends_on_time = false;
  c.eval = [slopes, offset](double, double, const VectorXd& y) {
    MatrixXd out = offset;
    for (std::size_t k = 0; k < slopes.size(); ++k) out += slopes[k] * y(static_cast<Index>(k));
    return out;
  };
  c.d_time = [d, n](double, double, const VectorXd&) { return MatrixXd(MatrixXd::Zero(d, n)); };
  c.d_inner = c.d_time;
  c.d_state = [slopes](double, double, const VectorXd&) { return slopes; };
  return c;
}

Coefficient identity() {
  Coefficient c = linear({MatrixXd::Ones(1, 1)}, MatrixXd::Zero(1, 1));
  c.name = "identity";
  return c;
}

Coefficient separable(ScalarFunction phi, StateFunction psi, std::string name) {
  Coefficient c;
  c.name = std::move(name);
  c.state_dim = psi.d;
  c.noise_dim = psi.n;
  c.eval = [phi, psi](double t, double u, const VectorXd& y) { return MatrixXd(phi.value(t - u) * psi.value(y)); };
  c.d_time = [phi, psi](double t, double u, const VectorXd& y) {
    return MatrixXd(phi.derivative(t - u) * psi.value(y));
  };
  c.d_inner = [phi, psi](double t, double u, const VectorXd& y) {
    return MatrixXd(-phi.derivative(t - u) * psi.value(y));
  };
  c.d_state = [phi, psi](double t, double u, const VectorXd& y) {
    auto g = psi.derivative(y);
    const double f = phi.value(t - u);
    for (auto& m : g) m *= f;
    return g;
  };
  return c;
}

Coefficient trigonometric(Index d, Index n, double amplitude, double offset, double frequency) {
  Coefficient c;
  c.name = "trigonometric";
  c.state_dim = d;
  c.noise_dim = n;
  c.depends_on_time = frequency != 0.0;
  c.eval = [=](double t, double u, const VectorXd& y) {
    const double k = std::cos(frequency * (t - u));
    MatrixXd out(d, n);
    for (Index i = 0; i < d; ++i) out.row(i).setConstant(offset + amplitude * std::sin(y(i)) * k);
    return out;
  };
  c.d_time = [=](double t, double u, const VectorXd& y) {
    const double k = -frequency * std::sin(frequency * (t - u));
    MatrixXd out(d, n);
    for (Index i = 0; i < d; ++i) out.row(i).setConstant(amplitude * std::sin(y(i)) * k);
    return out;
  };
  c.d_inner = [=](double t, double u, const VectorXd& y) {
    const double k = frequency * std::sin(frequency * (t - u));
    MatrixXd out(d, n);
    for (Index i = 0; i < d; ++i) out.row(i).setConstant(amplitude * std::sin(y(i)) * k);
    return out;
  };
  c.d_state = [=](double t, double u, const VectorXd& y) {
    const double k = std::cos(frequency * (t - u));
    std::vector<MatrixXd> g(static_cast<std::size_t>(d), MatrixXd::Zero(d, n));
    for (Index i = 0; i < d; ++i) g[static_cast<std::size_t>(i)].row(i).setConstant(amplitude * std::cos(y(i)) * k);
    return g;
  };
  return c;
}

Coefficient affine_kernel() {
  Coefficient c = separable(linear_function(1.0, 0.0), constant_state(MatrixXd::Ones(1, 1)), "affine_kernel");
  return c;
}

ScalarFunction constant_function(double value) {
  return {[value](double) { return value; }, [](double) { return 0.0; }};
}

ScalarFunction linear_function(double slope, double intercept) {
  return {[=](double r) { return slope * r + intercept; }, [slope](double) { return slope; }};
}

ScalarFunction exponential_decay(double rate) {
  return {[rate](double r) { return std::exp(-rate * r); }, [rate](double r) { return -rate * std::exp(-rate * r); }};
}

StateFunction constant_state(MatrixXd value) {
  StateFunction f;
  f.d = value.rows();
  f.n = value.cols();
  const Index d = f.d, n = f.n;
  f.value = [value](const VectorXd&) { return value; };
  f.derivative = [d, n](const VectorXd&) {
    return std::vector<MatrixXd>(static_cast<std::size_t>(d), MatrixXd::Zero(d, n));
  };
  return f;
}

StateFunction linear_state(double scale) {
  StateFunction f;
  f.value = [scale](const VectorXd& y) { return MatrixXd::Constant(1, 1, scale * y(0)); };
  f.derivative = [scale](const VectorXd&) { return std::vector<MatrixXd>{MatrixXd::Constant(1, 1, scale)}; };
  return f;
}

StateFunction sine_state(Index d, Index n, double amplitude, double offset) {
  StateFunction f;
  f.d = d;
  f.n = n;
  f.value = [=](const VectorXd& y) {
    MatrixXd out(d, n);
    for (Index i = 0; i < d; ++i) out.row(i).setConstant(offset + amplitude * std::sin(y(i)));
    return out;
  };
  f.derivative = [=](const VectorXd& y) {
    std::vector<MatrixXd> g(static_cast<std::size_t>(d), MatrixXd::Zero(d, n));
    for (Index i = 0; i < d; ++i) g[static_cast<std::size_t>(i)].row(i).setConstant(amplitude * std::cos(y(i)));
    return g;
  };
  return f;
}

}  // namespace coefficients

}  // namespace rvolt
