#pragma once

#include "rvolt/coefficient.hpp"
#include "rvolt/grid.hpp"

#include <vector>

namespace rvolt {

/// Power kernel (t - u)^{-alpha} applied to psi(y_u) dx_u, with the exponents
/// of the driver (gamma) and of the solution class (kappa).
struct KernelSpec {
  double alpha = 0.25;
  coefficients::StateFunction psi;
  double gamma = 0.75;
  double kappa = 0.5;

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  /// Midpoint of (1 - (gamma - alpha), gamma - alpha), which is always 1/2.
  static double default_kappa(double alpha, double gamma);
};

/// (t - u)^{-alpha}; evaluated as exp(-alpha log(t - u)) when t - u < 1e-8 * scale.
double kernel_power(double r, double alpha, double scale = 1.0);

/// (t - u)^{-alpha} - (s - u)^{-alpha} for 0 <= u < s <= t. Zero when t == s.
double kernel_increment(double t, double s, double u, double alpha);

/// Value of a dyadic scheme together with every level J_0, ..., J_L.
struct DyadicSum {
  VectorXd value;
  std::vector<VectorXd> levels;
  /// |J_L - J_{L-1}|, an a-posteriori error proxy (0 with a single level).
  double last_correction = 0.0;
};

/// int_s^t (t - u)^{-alpha} psi(y_u) dx_u with s = t_i, t = t_j, j - i a power of two.
/// Level n is the left-point sum over the points s + l (t - s) / 2^n, l < 2^n.
DyadicSum singular_integral_diag(const KernelSpec& k, const Path& y, const Path& x, Index i, Index j);

/// int_0^s [(t - u)^{-alpha} - (s - u)^{-alpha}] psi(y_u) dx_u with s = t_i, t = t_j,
/// i a power of two; levels use the points l s / 2^n. Zero when i = 0.
DyadicSum singular_integral_offdiag(const KernelSpec& k, const Path& y, const Path& x, Index i, Index j);

/// (delta z)_{ij} for z_t = int_0^t (t - u)^{-alpha} psi(y_u) dx_u at the grid
/// resolution. Any 0 <= i <= j <= N is accepted; for dyadic pairs this equals
/// the finest levels of the diagonal and off-diagonal schemes.
VectorXd singular_increment(const KernelSpec& k, const Path& y, const Path& x, Index i, Index j);

/// Precomputed kernel weights w[r] = (r dt)^{-alpha}, r = 1..N, for grid Riemann sums.
std::vector<double> kernel_weights(const Grid& grid, double alpha);

/// z_m = sum_{k<m} (t_m - t_k)^{-alpha} psi(y_k) dx_k for every m.
Path singular_path(const KernelSpec& k, const Path& y, const Path& x);

/// The same kernel written as a Volterra coefficient sigma(t, u, y) = (t - u)^{-alpha} psi(y).
/// Singular on the diagonal; only for evaluation at u < t.
Coefficient singular_coefficient(const KernelSpec& k);

}  // namespace rvolt
