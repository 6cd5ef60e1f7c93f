#pragma once

#include "rvolt/grid.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace rvolt {

/// A 1-increment: a vector-valued function of grid pairs (i, j), i <= j,
/// vanishing on the diagonal. Evaluated lazily unless cached().
template <typename Scalar>
class BasicIncrement2 {
 public:
  using Rule = std::function<Vector<Scalar>(Index, Index)>;

  /// Largest grid for which a dense cache may be built.
  static constexpr Index kMaxCachedSteps = 4096;

  BasicIncrement2(BasicGrid<Scalar> grid, Index dim, Rule rule)
      : grid_(grid), dim_(dim), rule_(std::move(rule)) {}

  const BasicGrid<Scalar>& grid() const { return grid_; }
  Index dim() const { return dim_; }

  Vector<Scalar> operator()(Index i, Index j) const {
    if (i == j) return Vector<Scalar>::Zero(dim_);
    if (cache_) {
      const Index n = grid_.n_points();
      return Eigen::Map<const Vector<Scalar>>(cache_->data() + (i * n + j) * dim_, dim_);
    }
    return rule_(i, j);
  }

  bool is_cached() const { return cache_ != nullptr; }

  /// Dense copy holding every pair (i, j) with i <= j.
  BasicIncrement2 cached() const {
    if (grid_.n_steps() > kMaxCachedSteps) {
      throw std::invalid_argument("dense increment cache is limited to N <= 4096");
    }
    const Index n = grid_.n_points();
    auto store = std::make_shared<std::vector<Scalar>>(static_cast<std::size_t>(n * n * dim_), Scalar(0));
    for (Index i = 0; i < n; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        Eigen::Map<Vector<Scalar>>(store->data() + (i * n + j) * dim_, dim_) = (*this)(i, j);
      }
    }
    BasicIncrement2 out(grid_, dim_, rule_);
    out.cache_ = std::move(store);
    return out;
  }

 private:
  BasicGrid<Scalar> grid_;
  Index dim_;
  Rule rule_;
  std::shared_ptr<const std::vector<Scalar>> cache_;
};

/// A 2-increment: a function of grid triples (i, j, k), i <= j <= k.
template <typename Scalar>
class BasicIncrement3 {
 public:
  using Rule = std::function<Vector<Scalar>(Index, Index, Index)>;

  BasicIncrement3(BasicGrid<Scalar> grid, Index dim, Rule rule)
      : grid_(grid), dim_(dim), rule_(std::move(rule)) {}

  const BasicGrid<Scalar>& grid() const { return grid_; }
  Index dim() const { return dim_; }

  Vector<Scalar> operator()(Index i, Index j, Index k) const {
    if (i == j || j == k) return Vector<Scalar>::Zero(dim_);
    return rule_(i, j, k);
  }

 private:
  BasicGrid<Scalar> grid_;
  Index dim_;
  Rule rule_;
};

using Increment2 = BasicIncrement2<double>;
using Increment3 = BasicIncrement3<double>;

/// (delta f)_{ij} = f_j - f_i.
template <typename Scalar>
BasicIncrement2<Scalar> delta1(const BasicPath<Scalar>& f) {
  return BasicIncrement2<Scalar>(f.grid(), f.dim(),
                                 [f](Index i, Index j) { return f.increment(i, j); });
}

/// (delta h)_{ijk} = h_{ik} - h_{ij} - h_{jk}.
template <typename Scalar>
BasicIncrement3<Scalar> delta2(const BasicIncrement2<Scalar>& h) {
  return BasicIncrement3<Scalar>(h.grid(), h.dim(), [h](Index i, Index j, Index k) {
    return Vector<Scalar>(h(i, k) - h(i, j) - h(j, k));
  });
}

template <typename Scalar>
BasicIncrement2<Scalar> operator+(const BasicIncrement2<Scalar>& a, const BasicIncrement2<Scalar>& b) {
  return BasicIncrement2<Scalar>(a.grid(), a.dim(),
                                 [a, b](Index i, Index j) { return Vector<Scalar>(a(i, j) + b(i, j)); });
}

template <typename Scalar>
BasicIncrement2<Scalar> operator-(const BasicIncrement2<Scalar>& a, const BasicIncrement2<Scalar>& b) {
  return BasicIncrement2<Scalar>(a.grid(), a.dim(),
                                 [a, b](Index i, Index j) { return Vector<Scalar>(a(i, j) - b(i, j)); });
}

/// Left product with a matrix path: (z h)_{ij} = z_i h_{ij}. With h = delta1(x) this
/// is the Young germ z_s (delta x)_{st}.
template <typename Scalar>
BasicIncrement2<Scalar> left_product(const BasicMatrixPath<Scalar>& z, const BasicIncrement2<Scalar>& h) {
  if (z.cols() != h.dim()) throw std::invalid_argument("left_product: shape mismatch");
  return BasicIncrement2<Scalar>(h.grid(), z.rows(),
                                 [z, h](Index i, Index j) { return Vector<Scalar>(z[i] * h(i, j)); });
}

/// Scalar products following the convention (g h)_{st} = g_s h_{st} and
/// (h g)_{st} = h_{st} g_t for a scalar path g.
template <typename Scalar>
BasicIncrement2<Scalar> scale_left(const BasicPath<Scalar>& g, const BasicIncrement2<Scalar>& h) {
  return BasicIncrement2<Scalar>(h.grid(), h.dim(),
                                 [g, h](Index i, Index j) { return Vector<Scalar>(g[i](0) * h(i, j)); });
}

template <typename Scalar>
BasicIncrement2<Scalar> scale_right(const BasicIncrement2<Scalar>& h, const BasicPath<Scalar>& g) {
  return BasicIncrement2<Scalar>(h.grid(), h.dim(),
                                 [g, h](Index i, Index j) { return Vector<Scalar>(h(i, j) * g[j](0)); });
}

/// Pointwise product of two paths of equal dimension.
template <typename Scalar>
BasicPath<Scalar> pointwise_product(const BasicPath<Scalar>& a, const BasicPath<Scalar>& b) {
  return BasicPath<Scalar>(a.grid(), a.values().cwiseProduct(b.values()));
}

/// Discrete Hoelder norm: the supremum over stored pairs, with the pair attaining it.
/// A grid supremum is a lower bound for the continuum norm.
struct HolderNorm {
  double exponent = 0.0;
  double value = 0.0;
  Index arg_i = 0;
  Index arg_j = 0;
};

template <typename Scalar>
HolderNorm holder_norm(const BasicIncrement2<Scalar>& g, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("Hoelder exponent must be positive");
  HolderNorm out{mu, 0.0, 0, 0};
  const auto& grid = g.grid();
  for (Index i = 0; i < grid.n_points(); ++i) {
    for (Index j = i + 1; j < grid.n_points(); ++j) {
      const double r = static_cast<double>(g(i, j).norm()) /
                       std::pow(static_cast<double>(grid.t(j) - grid.t(i)), mu);
      if (r > out.value) out = {mu, r, i, j};
    }
  }
  return out;
}

/// Hoelder norm of a path restricted to indices [first, last], without building
/// an Increment2.
template <typename Scalar>
HolderNorm holder_norm(const BasicPath<Scalar>& f, double mu, Index first, Index last) {
  if (!(mu > 0.0)) throw std::invalid_argument("Hoelder exponent must be positive");
  HolderNorm out{mu, 0.0, first, first};
  const auto& grid = f.grid();
  const auto& v = f.values();
  std::vector<double> weight(static_cast<std::size_t>(last - first + 1), 0.0);
  for (Index k = 1; k <= last - first; ++k) {
    weight[static_cast<std::size_t>(k)] = std::pow(static_cast<double>(grid.t(k)), -mu);
  }
  for (Index i = first; i <= last; ++i) {
    for (Index j = i + 1; j <= last; ++j) {
      const double r = static_cast<double>((v.row(j) - v.row(i)).norm()) *
                       weight[static_cast<std::size_t>(j - i)];
      if (r > out.value) out = {mu, r, i, j};
    }
  }
  return out;
}

template <typename Scalar>
HolderNorm holder_norm(const BasicPath<Scalar>& f, double mu) {
  return holder_norm(f, mu, 0, f.grid().n_steps());
}

template <typename Scalar>
HolderNorm holder_norm(const BasicMatrixPath<Scalar>& f, double mu) {
  return holder_norm(f.flattened(), mu);
}

/// Sup norm of a path (the C^0 norm of a 1-increment).
template <typename Scalar>
double sup_norm(const BasicPath<Scalar>& f) {
  return static_cast<double>(f.values().rowwise().norm().maxCoeff());
}

template <typename Scalar>
double sup_norm(const BasicMatrixPath<Scalar>& f) {
  double out = 0.0;
  for (Index i = 0; i < f.grid().n_points(); ++i) out = std::max(out, static_cast<double>(f[i].norm()));
  return out;
}

/// Fixed-split norm sup |h_{ijk}| / (|t_j - t_i|^a |t_k - t_j|^b) over all triples.
/// With a = b = mu/2 it dominates the infimum norm on 2-increments and is used
/// as the computable size of delta2(g) in sewing bounds.
template <typename Scalar>
double split_holder_norm(const BasicIncrement3<Scalar>& h, double a, double b) {
  const auto& grid = h.grid();
  const Index n = grid.n_points();
  double out = 0.0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double left = std::pow(static_cast<double>(grid.t(j) - grid.t(i)), a);
      for (Index k = j + 1; k < n; ++k) {
        const double right = std::pow(static_cast<double>(grid.t(k) - grid.t(j)), b);
        out = std::max(out, static_cast<double>(h(i, j, k).norm()) / (left * right));
      }
    }
  }
  return out;
}

/// Largest |h_{ijk}| over all triples.
template <typename Scalar>
double max_abs(const BasicIncrement3<Scalar>& h) {
  const Index n = h.grid().n_points();
  double out = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      for (Index k = j + 1; k < n; ++k) out = std::max(out, static_cast<double>(h(i, j, k).norm()));
  return out;
}

}  // namespace rvolt
