#pragma once

#include "rvolt/grid.hpp"
#include "rvolt/regression.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace rvolt {

enum class FbmMethod { automatic, cholesky, circulant };

std::string to_string(FbmMethod m);
FbmMethod fbm_method_from_string(const std::string& s);

/// Grids with at least this many steps use circulant embedding by default.
constexpr Index kCirculantThreshold = 1024;

struct FbmSpec {
  double hurst = 0.75;
  Index dim = 1;
  Grid grid{1.0, 1024};
  std::uint64_t seed = 0;
  FbmMethod method = FbmMethod::automatic;

  /// Hurst parameter in (1/3, 1), positive dimension.
  void validate() const;
};

/// E[B_s B_t] = (s^{2H} + t^{2H} - |t - s|^{2H}) / 2.
double fbm_covariance(double s, double t, double hurst);

/// Autocovariance of fractional Gaussian noise with step dt at lag k.
double fgn_autocovariance(Index lag, double hurst, double dt);

/// Description of the generator and stream splitting, echoed in reports.
std::string rng_description();

/// Engine for one component: mt19937_64 seeded with seed_seq{lo(seed), hi(seed), component}.
std::mt19937_64 component_engine(std::uint64_t seed, std::uint64_t component);

/// Factors the increment covariance once; every sample() is then O(N^2)
/// (Cholesky) or O(N log N) (circulant).
class FbmSampler {
 public:
  FbmSampler(double hurst, Grid grid, FbmMethod method = FbmMethod::automatic);

  /// The method in use after any fallback.
  FbmMethod method() const { return method_; }
  /// True when circulant embedding was requested but had a negative eigenvalue.
  bool fell_back() const { return fell_back_; }
  const Grid& grid() const { return grid_; }
  double hurst() const { return hurst_; }

  /// One fractional Gaussian noise vector (N increments).
  VectorXd increments(std::mt19937_64& engine) const;

  /// Path with B_0 = 0; component c uses component_engine(seed, c).
  Path sample(std::uint64_t seed, Index dim) const;

 private:
  double hurst_;
  Grid grid_;
  FbmMethod method_;
  bool fell_back_ = false;
  MatrixXd chol_;           // lower factor of the Toeplitz covariance
  std::vector<double> sqrt_eig_;  // square roots of the circulant eigenvalues
};

struct FbmInfo {
  FbmMethod method = FbmMethod::automatic;
  bool fell_back = false;
};

Path generate_fbm(const FbmSpec& spec, FbmInfo* info = nullptr);

struct HolderEstimate {
  /// Least-squares slope; +inf for a constant path.
  double exponent = 0.0;
  bool degenerate = false;
  LinearFit fit{};
};

/// Regresses log max |p_{t+h} - p_t| over dyadic blocks on log h, using the
/// `levels` finest scales h = 2^m T / N, m = 0..levels-1.
HolderEstimate estimate_holder(const Path& p, int levels);

namespace drivers {

/// Smooth test drivers on a grid: "linear" (t), "sine" (sin t), "cosine" (cos t),
/// "circle" (sin t, cos t), "parabola" (t, t^2), "zero".
Path builtin(const std::string& name, const Grid& grid);
std::vector<std::string> builtin_names();

}  // namespace drivers

}  // namespace rvolt
