#pragma once

#include <Eigen/Core>

#include <bit>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rvolt {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Uniform dyadic partition t_i = i * T / N of [0, T]. N must be a power of two.
template <typename Scalar>
class BasicGrid {
 public:
  BasicGrid(Scalar horizon, Index n_steps) : horizon_(horizon), n_steps_(n_steps) {
    if (!(horizon > Scalar(0)) || !std::isfinite(static_cast<double>(horizon))) {
      throw std::invalid_argument("grid horizon must be positive and finite");
    }
    if (n_steps < 1 || !std::has_single_bit(static_cast<std::size_t>(n_steps))) {
      throw std::invalid_argument("grid step count must be a power of two, got " +
                                  std::to_string(n_steps));
    }
  }

  Scalar horizon() const { return horizon_; }
  Index n_steps() const { return n_steps_; }
  Index n_points() const { return n_steps_ + 1; }
  Scalar step() const { return horizon_ / Scalar(n_steps_); }

  // Computed as i*T/N rather than i*dt so t(N) == T exactly.
  Scalar t(Index i) const { return Scalar(i) * horizon_ / Scalar(n_steps_); }

  /// Number of dyadic levels, log2(N).
  int levels() const { return std::countr_zero(static_cast<std::size_t>(n_steps_)); }

  /// The same horizon with `factor` times as many cells (factor a power of two).
  BasicGrid refined(Index factor) const { return BasicGrid(horizon_, n_steps_ * factor); }
  BasicGrid coarsened(Index factor) const {
    if (factor < 1 || n_steps_ % factor != 0) {
      throw std::invalid_argument("coarsening factor must divide the step count");
    }
    return BasicGrid(horizon_, n_steps_ / factor);
  }

  bool operator==(const BasicGrid& other) const {
    return horizon_ == other.horizon_ && n_steps_ == other.n_steps_;
  }

 private:
  Scalar horizon_;
  Index n_steps_;
};

/// Vector-valued samples on a grid; row i holds the value at t_i.
template <typename Scalar>
class BasicPath {
 public:
  using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  BasicPath(BasicGrid<Scalar> grid, Values values) : grid_(grid), values_(std::move(values)) {
    if (values_.rows() != grid_.n_points()) {
      throw std::invalid_argument("path needs N+1 samples, got " + std::to_string(values_.rows()));
    }
    if (values_.cols() < 1) throw std::invalid_argument("path dimension must be positive");
    if (!values_.allFinite()) throw std::invalid_argument("path values must be finite");
  }

  /// Samples f(t_i) for a callable returning a Vector (or anything assignable to a row).
  template <typename F>
  static BasicPath sample(const BasicGrid<Scalar>& grid, Index dim, F&& f) {
    Values v(grid.n_points(), dim);
    for (Index i = 0; i < grid.n_points(); ++i) v.row(i) = f(grid.t(i)).transpose();
    return BasicPath(grid, std::move(v));
  }

  static BasicPath constant(const BasicGrid<Scalar>& grid, const Vector<Scalar>& value) {
    Values v = value.transpose().replicate(grid.n_points(), 1);
    return BasicPath(grid, std::move(v));
  }

  const BasicGrid<Scalar>& grid() const { return grid_; }
  Index dim() const { return values_.cols(); }
  const Values& values() const { return values_; }

  auto operator[](Index i) const { return values_.row(i).transpose(); }

  /// Increment (delta f)_{ij} = f_j - f_i.
  Vector<Scalar> increment(Index i, Index j) const {
    return (values_.row(j) - values_.row(i)).transpose();
  }

  /// Keep every `factor`-th sample.
  BasicPath restricted(Index factor) const {
    auto coarse = grid_.coarsened(factor);
    Values v(coarse.n_points(), dim());
    for (Index i = 0; i < coarse.n_points(); ++i) v.row(i) = values_.row(i * factor);
    return BasicPath(coarse, std::move(v));
  }

 private:
  BasicGrid<Scalar> grid_;
  Values values_;
};

/// Matrix-valued samples (rows x cols at every grid point), e.g. integrands or
/// Gubinelli derivatives.
template <typename Scalar>
class BasicMatrixPath {
 public:
  BasicMatrixPath(BasicGrid<Scalar> grid, Index rows, Index cols)
      : grid_(grid), rows_(rows), cols_(cols),
        values_(static_cast<std::size_t>(grid.n_points()), Matrix<Scalar>::Zero(rows, cols)) {}

  BasicMatrixPath(BasicGrid<Scalar> grid, std::vector<Matrix<Scalar>> values)
      : grid_(grid), values_(std::move(values)) {
    if (static_cast<Index>(values_.size()) != grid_.n_points() || values_.empty()) {
      throw std::invalid_argument("matrix path needs N+1 samples");
    }
    rows_ = values_.front().rows();
    cols_ = values_.front().cols();
    for (const auto& m : values_) {
      if (m.rows() != rows_ || m.cols() != cols_) {
        throw std::invalid_argument("matrix path samples must share a shape");
      }
    }
  }

  const BasicGrid<Scalar>& grid() const { return grid_; }
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  const Matrix<Scalar>& operator[](Index i) const { return values_[static_cast<std::size_t>(i)]; }
  Matrix<Scalar>& operator[](Index i) { return values_[static_cast<std::size_t>(i)]; }

  /// Flattened row-major view as an ordinary path of dimension rows*cols.
  BasicPath<Scalar> flattened() const {
    typename BasicPath<Scalar>::Values v(grid_.n_points(), rows_ * cols_);
    for (Index i = 0; i < grid_.n_points(); ++i) {
      for (Index r = 0; r < rows_; ++r) {
        for (Index c = 0; c < cols_; ++c) v(i, r * cols_ + c) = (*this)[i](r, c);
      }
    }
    return BasicPath<Scalar>(grid_, std::move(v));
  }

 private:
  BasicGrid<Scalar> grid_;
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Matrix<Scalar>> values_;
};

using Grid = BasicGrid<double>;
using Path = BasicPath<double>;
using MatrixPath = BasicMatrixPath<double>;
using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

}  // namespace rvolt
