#pragma once

#include "rvolt/coefficient.hpp"
#include "rvolt/increment.hpp"

#include <limits>
#include <vector>

namespace rvolt {

/// Second-level lift of an n-dimensional path: x2_{st}(a, b) = int_s^t (x^a_r - x^a_s) dx^b_r.
/// Stores the areas of adjacent cells; other pairs follow from Chen's relation
/// x2_{st} = x2_{su} + x2_{ut} + dx_{su} dx_{ut}^T.
class LevyArea {
 public:
  LevyArea(Path x, std::vector<MatrixXd> cells);

  /// Linear interpolation between grid points: each cell carries 1/2 dx dx^T.
  static LevyArea piecewise_linear(const Path& x);

  /// Piecewise-linear lift of `fine`, restricted to the grid coarsened by `factor`.
  static LevyArea from_refined(const Path& fine, Index factor);

  const Path& path() const { return x_; }
  const Grid& grid() const { return x_.grid(); }
  Index dim() const { return x_.dim(); }
  const MatrixXd& cell(Index k) const { return cells_[static_cast<std::size_t>(k)]; }
  const std::vector<MatrixXd>& cells() const { return cells_; }

  /// x2_{ij} by forward Chen recursion over the cells of [t_i, t_j].
  MatrixXd operator()(Index i, Index j) const;

  /// Areas over the coarsened grid, obtained from Chen's relation.
  LevyArea restricted(Index factor) const;

 private:
  Path x_;
  std::vector<MatrixXd> cells_;
};

/// max over grid triples i < j < k of |x2_{ik} - x2_{ij} - x2_{jk} - sign * dx_{ij} dx_{jk}^T|.
/// `cross_sign` other than +1 is a fault-injection hook for the check suite.
double chen_defect(const LevyArea& xx, double cross_sign = 1.0);

/// max over pairs of |x2_{ij} + x2_{ij}^T - dx_{ij} dx_{ij}^T|; zero for geometric lifts.
double symmetry_defect(const LevyArea& xx);

/// A path y controlled by x: (delta y)_{st} = y'_s (delta x)_{st} + r_{st}, with
/// y of dimension d, y' a d x n matrix path and x of dimension n.
struct ControlledPath {
  ControlledPath(Path y, MatrixPath yprime, Path x, double gamma, double eta);

  Path y;
  MatrixPath yprime;
  Path x;
  double gamma;
  double eta;

  VectorXd remainder(Index i, Index j) const;
  Increment2 remainder_increment() const;
};

/// Seminorm of the controlled-path space and its four summands.
struct QNorm {
  double y_holder = 0.0;          // N[y; C^gamma]
  double yprime_sup = 0.0;        // N[y'; C^0]
  double yprime_holder = 0.0;     // N[y'; C^{eta - gamma}]
  double remainder_holder = 0.0;  // N[r; C_2^eta]
  double total = 0.0;
};

QNorm q_norm(const ControlledPath& y);

/// sum_{k=i}^{j-1} [z_k dx_k + z'_k . x2_k] for a row integrand: z has dimension n
/// and z' is n x n with z'(b, a) the derivative of z_b along x^a. The contraction
/// z' . A is sum_{a, b} z'(b, a) A(a, b).
double rough_integral(const ControlledPath& z, const LevyArea& xx, Index i, Index j);

/// Row-by-row assembly of a d-vector integral.
VectorXd rough_integral(const std::vector<ControlledPath>& rows, const LevyArea& xx, Index i, Index j);

/// Row `row` of sigma(t, ., Y): the pair (u -> sigma_row(t, u, y_u), u -> D_y sigma_row o y'_u).
ControlledPath controlled_compose(const Coefficient& sigma, Index row, double t, const ControlledPath& y);

/// sigma(t, u, y) dx + (D_y sigma(t, u, y) o y') . x2, the second-order germ of one
/// Volterra integrand evaluated with running time t.
VectorXd rough_germ(const Coefficient& sigma, double t, double u, const VectorXd& y, const MatrixXd& yprime,
                    const VectorXd& dx, const MatrixXd& area);

/// Increment (delta z)_{st} of z_t = int_0^t sigma(t, u, y_u) dx_u, split as
/// sigma(s, s, y_s) dx_{st} plus the remainder pieces r0, r11, r12, r21, r22.
struct RoughIncrement {
  VectorXd gubinelli;
  VectorXd r0;
  VectorXd r11;
  VectorXd r12;
  VectorXd r21;
  VectorXd r22;
  VectorXd total;

  /// r12 and r22 recomputed as -Lambda of their germs via lambda_of (debug mode only).
  VectorXd r12_lambda;
  VectorXd r22_lambda;

  VectorXd remainder() const { return r0 + r11 + r12 + r21 + r22; }
};

/// Largest grid accepted in debug mode.
constexpr Index kRoughDebugMaxSteps = 256;

RoughIncrement volterra_remainder_rough(const Coefficient& sigma, const ControlledPath& y, const LevyArea& xx,
                                        Index i, Index j, bool debug = false);

}  // namespace rvolt
