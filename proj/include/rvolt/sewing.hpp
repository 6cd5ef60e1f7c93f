#pragma once

#include "rvolt/increment.hpp"
#include "rvolt/regression.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

namespace rvolt {

/// Error-free transformation a + b = s + e (Knuth TwoSum).
template <typename Scalar>
inline void two_sum(Scalar a, Scalar b, Scalar& s, Scalar& e) {
  s = a + b;
  const Scalar bb = s - a;
  e = (a - (s - bb)) + (b - bb);
}

/// Vector accumulator carrying a running error term (double-word summation).
template <typename Scalar>
class CompensatedSum {
 public:
  explicit CompensatedSum(Index dim) : hi_(Vector<Scalar>::Zero(dim)), lo_(Vector<Scalar>::Zero(dim)) {}

  template <typename Derived>
  void add(const Eigen::MatrixBase<Derived>& v) {
    for (Index c = 0; c < hi_.size(); ++c) {
      Scalar s, e;
      two_sum(hi_(c), static_cast<Scalar>(v(c)), s, e);
      hi_(c) = s;
      lo_(c) += e;
    }
  }

  Vector<Scalar> value() const { return hi_ + lo_; }
  const Vector<Scalar>& hi() const { return hi_; }
  const Vector<Scalar>& lo() const { return lo_; }

 private:
  Vector<Scalar> hi_;
  Vector<Scalar> lo_;
};

/// c_mu = 2 + 2^mu * zeta(mu), mu > 1.
double sewing_constant(double mu);

/// zeta(mu) for mu > 1: direct partial sum plus an integral-test tail with
/// Euler-Maclaurin corrections; stops once the first omitted correction is below
/// 1e-12 relative.
double zeta_series(double mu);

struct SewingDiagnostic {
  /// Least-squares exponent of max |delta2(g)| over dyadic triples versus scale;
  /// +inf when delta2(g) vanishes.
  double regularity = std::numeric_limits<double>::infinity();
  /// Set when the fitted exponent is <= 1: Riemann sums of g may not converge.
  bool warning = false;
};

/// Empirical size exponent of delta2(g) on dyadic triples (i, i+h, i+2h).
template <typename Scalar>
SewingDiagnostic sewing_diagnostic(const BasicIncrement2<Scalar>& g) {
  const auto& grid = g.grid();
  const Index n = grid.n_steps();
  std::vector<double> scales, sizes;
  for (Index h = 1; 2 * h <= n; h *= 2) {
    double worst = 0.0;
    for (Index i = 0; i + 2 * h <= n; i += 2 * h) {
      const Vector<Scalar> v = g(i, i + 2 * h) - g(i, i + h) - g(i + h, i + 2 * h);
      worst = std::max(worst, static_cast<double>(v.norm()));
    }
    const double scale = 2.0 * static_cast<double>(h) * static_cast<double>(grid.step());
    // Roundoff-level values carry no regularity information.
    if (worst > 64 * std::numeric_limits<double>::epsilon()) {
      scales.push_back(std::log(scale));
      sizes.push_back(std::log(worst));
    }
  }
  SewingDiagnostic out;
  if (scales.size() >= 2) {
    out.regularity = fit_line(scales, sizes).slope;
    out.warning = out.regularity <= 1.0;
  }
  return out;
}

/// The sewing of g on the working grid: the additive increment
/// (delta f)_{ij} = sum_{k=i}^{j-1} g_{k,k+1}, accumulated in double-word
/// prefix sums so every pair query is O(1). `mu` is the caller's claimed
/// regularity of delta2(g); it is checked only through `diagnostic`.
template <typename Scalar>
BasicIncrement2<Scalar> sew(const BasicIncrement2<Scalar>& g, double mu, SewingDiagnostic* diagnostic = nullptr) {
  (void)mu;
  if (diagnostic) *diagnostic = sewing_diagnostic(g);
  const auto& grid = g.grid();
  const Index n = grid.n_points();
  const Index dim = g.dim();
  auto hi = std::make_shared<Matrix<Scalar>>(Matrix<Scalar>::Zero(dim, n));
  auto lo = std::make_shared<Matrix<Scalar>>(Matrix<Scalar>::Zero(dim, n));
  CompensatedSum<Scalar> acc(dim);
  for (Index k = 0; k + 1 < n; ++k) {
    acc.add(g(k, k + 1));
    hi->col(k + 1) = acc.hi();
    lo->col(k + 1) = acc.lo();
  }
  return BasicIncrement2<Scalar>(grid, dim, [hi, lo](Index i, Index j) {
    Vector<Scalar> out(hi->rows());
    for (Index c = 0; c < out.size(); ++c) {
      Scalar s, e;
      two_sum((*hi)(c, j), -(*hi)(c, i), s, e);
      out(c) = s + (e + ((*lo)(c, j) - (*lo)(c, i)));
    }
    return out;
  });
}

/// Lambda(delta g) = g - sew(g): the unique regular 1-increment whose coboundary is
/// delta2(g), realized through the identity delta f = (Id - Lambda delta) g.
template <typename Scalar>
BasicIncrement2<Scalar> lambda_of(const BasicIncrement2<Scalar>& g, double mu,
                                  SewingDiagnostic* diagnostic = nullptr) {
  return g - sew(g, mu, diagnostic);
}

}  // namespace rvolt
