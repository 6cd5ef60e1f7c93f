#pragma once

#include "rvolt/coefficient.hpp"
#include "rvolt/increment.hpp"

namespace rvolt {

/// A matrix-valued integrand z (d x n at every grid point) with its asserted
/// Hoelder exponent rho. `norm` is the empirical rho-Hoelder norm when computed.
struct YoungIntegrand {
  MatrixPath z;
  double rho = 1.0;
  HolderNorm norm{};
};

/// Left-point Riemann sum sum_{k=i}^{j-1} z_k (x_{k+1} - x_k) on the working grid.
VectorXd young_integral(const MatrixPath& z, const Path& x, Index i, Index j);

inline VectorXd young_integral(const YoungIntegrand& z, const Path& x, Index i, Index j) {
  return young_integral(z.z, x, i, j);
}

/// The germ z_s (delta x)_{st}; sew() of it is the Young integral.
Increment2 young_germ(const MatrixPath& z, const Path& x);

/// u -> sigma(t, u, y_u) on the grid of y. With `gamma` > 0 the gamma-Hoelder
/// norm of the result is attached (O(N^2)).
YoungIntegrand compose_coeff(const Coefficient& sigma, double t, const Path& y, double gamma = 0.0);

/// Increment (delta z)_{ij} of z_t = int_0^t sigma(t, u, y_u) dx_u, split into the
/// part integrated over [s, t] and the past-dependent part over [0, s].
struct VolterraIncrement {
  VectorXd current;  // sum_{k=i}^{j-1} sigma(t_j, u_k, y_k) dx_k
  VectorXd past;     // sum_{k<i} [sigma(t_j, u_k, y_k) - sigma(t_i, u_k, y_k)] dx_k
  VectorXd total;
};

VolterraIncrement volterra_increment_young(const Coefficient& sigma, const Path& y, const Path& x, Index i,
                                           Index j);

/// z_m = sum_{k<m} sigma(t_m, u_k, y_k) dx_k for every grid index m.
Path volterra_path_young(const Coefficient& sigma, const Path& y, const Path& x);

}  // namespace rvolt
