#pragma once

#include "rvolt/grid.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rvolt {

/// A Volterra coefficient sigma(t, u, y) in R^{d x n} with its first derivatives.
/// `d_state(t, u, y)[k]` is the partial derivative with respect to y_k.
struct Coefficient {
  using Value = std::function<MatrixXd(double t, double u, const VectorXd& y)>;
  using StateDerivative = std::function<std::vector<MatrixXd>(double t, double u, const VectorXd& y)>;

  std::string name;
  Index state_dim = 1;  // d
  Index noise_dim = 1;  // n
  Value eval;
  Value d_time;   // d/dt, the running time
  Value d_inner;  // d/du, the integration variable
  StateDerivative d_state;
  /// False when sigma ignores its first argument; the past-dependent part of a
  /// Volterra increment then vanishes.
  bool depends_on_time = true;

  MatrixXd operator()(double t, double u, const VectorXd& y) const { return eval(t, u, y); }
};

struct DerivativeCheck {
  bool passed = true;
  double worst_relative_error = 0.0;
  std::string worst_component;
};

/// Compares every supplied derivative against central differences with step 1e-5
/// at 16 Halton points of [0, horizon]^2 x [-state_radius, state_radius]^d.
/// Errors are relative to max(|finite difference|, 1).
DerivativeCheck check_derivatives(const Coefficient& sigma, double horizon, double state_radius = 2.0,
                                  double tolerance = 1e-3);

/// Row `row` of D_y sigma composed with a Gubinelli derivative yprime (d x n):
/// the n x n matrix M with M(b, a) = sum_k d sigma_{row,b} / d y_k * yprime(k, a).
MatrixXd state_derivative_row(const std::vector<MatrixXd>& d_state, Index row, const MatrixXd& yprime);

namespace coefficients {

Coefficient zero(Index d, Index n);
Coefficient constant(MatrixXd value);

/// sigma(t, u, y) = offset + sum_k slopes[k] * y_k.
Coefficient linear(std::vector<MatrixXd> slopes, MatrixXd offset);

/// Scalar sigma(t, u, y) = y.
Coefficient identity();

struct ScalarFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

struct StateFunction {
  Index d = 1;
  Index n = 1;
  std::function<MatrixXd(const VectorXd&)> value;
  std::function<std::vector<MatrixXd>(const VectorXd&)> derivative;
};

/// sigma(t, u, y) = phi(t - u) psi(y).
Coefficient separable(ScalarFunction phi, StateFunction psi, std::string name = "separable");

/// sigma_{ij}(t, u, y) = offset + amplitude * sin(y_i) * cos(frequency * (t - u)), d x n.
Coefficient trigonometric(Index d, Index n, double amplitude, double offset, double frequency);

/// Scalar sigma(t, u, y) = t - u.
Coefficient affine_kernel();

ScalarFunction constant_function(double c);
ScalarFunction linear_function(double slope, double intercept);
ScalarFunction exponential_decay(double rate);

StateFunction constant_state(MatrixXd value);
/// psi(y) = scale * y for scalar states.
StateFunction linear_state(double scale);
/// psi_{ij}(y) = offset + amplitude * sin(y_i).
StateFunction sine_state(Index d, Index n, double amplitude, double offset);

}  // namespace coefficients

}  // namespace rvolt
