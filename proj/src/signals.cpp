#include "rvolt/signals.hpp"

#include <Eigen/Cholesky>
#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace rvolt {

std::string to_string(FbmMethod m) {
  switch (m) {
    case FbmMethod::automatic: return "auto";
    case FbmMethod::cholesky: return "cholesky";
    case FbmMethod::circulant: return "circulant";
  }
  return "auto";
}

FbmMethod fbm_method_from_string(const std::string& s) {
  if (s == "auto") return FbmMethod::automatic;
  if (s == "cholesky") return FbmMethod::cholesky;
  if (s == "circulant") return FbmMethod::circulant;
  throw std::invalid_argument("unknown fBm method '" + s + "' (expected auto, cholesky or circulant)");
}

void FbmSpec::validate() const {
  if (!(hurst > 1.0 / 3.0 && hurst < 1.0)) throw std::invalid_argument("Hurst parameter must lie in (1/3, 1)");
  if (dim < 1) throw std::invalid_argument("fBm dimension must be positive");
}

double fbm_covariance(double s, double t, double hurst) {
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

double fgn_autocovariance(Index lag, double hurst, double dt) {
  const double k = std::abs(static_cast<double>(lag)), h2 = 2.0 * hurst;
  return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(std::abs(k - 1.0), h2)) * std::pow(dt, h2);
}

std::string rng_description() {
  return "mt19937_64 per component, seed_seq{seed & 0xffffffff, seed >> 32, component}, "
         "std::normal_distribution<double> (libstdc++)";
}

std::mt19937_64 component_engine(std::uint64_t seed, std::uint64_t component) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(component)};
  return std::mt19937_64(seq);
}

FbmSampler::FbmSampler(double hurst, Grid grid, FbmMethod method) : hurst_(hurst), grid_(grid), method_(method) {
  FbmSpec{hurst, 1, grid, 0, method}.validate();
  const Index n = grid.n_steps();
  const double dt = grid.step();
  if (method_ == FbmMethod::automatic) {
    method_ = n >= kCirculantThreshold ? FbmMethod::circulant : FbmMethod::cholesky;
  }
  if (method_ == FbmMethod::circulant) {
    // First row of the 2N circulant embedding: c_0..c_N, c_{N-1}..c_1.
    const Index m = 2 * n;
    std::vector<std::complex<double>> row(static_cast<std::size_t>(m)), eig;
    for (Index k = 0; k <= n; ++k) row[static_cast<std::size_t>(k)] = fgn_autocovariance(k, hurst, dt);
    for (Index k = n + 1; k < m; ++k) row[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(m - k)];
    Eigen::FFT<double> fft;
    fft.fwd(eig, row);
    double largest = 0.0;
    for (const auto& e : eig) largest = std::max(largest, e.real());
    sqrt_eig_.resize(static_cast<std::size_t>(m));
    bool ok = true;
    for (Index k = 0; k < m; ++k) {
      const double e = eig[static_cast<std::size_t>(k)].real();
      if (e < -1e-12 * largest) ok = false;
      sqrt_eig_[static_cast<std::size_t>(k)] = std::sqrt(std::max(e, 0.0));
    }
    if (!ok) {
      fell_back_ = true;
      method_ = FbmMethod::cholesky;
      sqrt_eig_.clear();
    }
  }
  if (method_ == FbmMethod::cholesky) {
    MatrixXd cov(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) cov(i, j) = fgn_autocovariance(i - j, hurst, dt);
    Eigen::LLT<MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw std::runtime_error("fGn covariance is not positive definite");
    chol_ = llt.matrixL();
  }
}

VectorXd FbmSampler::increments(std::mt19937_64& engine) const {
  std::normal_distribution<double> normal;
  const Index n = grid_.n_steps();
  if (method_ == FbmMethod::cholesky) {
    VectorXd z(n);
    for (Index k = 0; k < n; ++k) z(k) = normal(engine);
    return chol_.triangularView<Eigen::Lower>() * z;
  }
  // Hermitian-symmetric Gaussian spectrum; its transform is real with the target covariance.
  const Index m = 2 * n;
  std::vector<std::complex<double>> w(static_cast<std::size_t>(m)), out;
  auto root = [&](Index k) { return sqrt_eig_[static_cast<std::size_t>(k)]; };
  w[0] = root(0) * normal(engine);
  w[static_cast<std::size_t>(n)] = root(n) * normal(engine);
  for (Index k = 1; k < n; ++k) {
    const double a = normal(engine), b = normal(engine);
    const std::complex<double> v = root(k) * std::sqrt(0.5) * std::complex<double>(a, b);
    w[static_cast<std::size_t>(k)] = v;
    w[static_cast<std::size_t>(m - k)] = std::conj(v);
  }
  Eigen::FFT<double> fft;
  fft.fwd(out, w);
  VectorXd x(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  for (Index k = 0; k < n; ++k) x(k) = out[static_cast<std::size_t>(k)].real() * scale;
  return x;
}

Path FbmSampler::sample(std::uint64_t seed, Index dim) const {
  const Index n = grid_.n_steps();
  Path::Values v = Path::Values::Zero(n + 1, dim);
  for (Index c = 0; c < dim; ++c) {
    auto engine = component_engine(seed, static_cast<std::uint64_t>(c));
    const VectorXd dx = increments(engine);
    for (Index k = 0; k < n; ++k) v(k + 1, c) = v(k, c) + dx(k);
  }
  return Path(grid_, std::move(v));
}

Path generate_fbm(const FbmSpec& spec, FbmInfo* info) {
  spec.validate();
  FbmSampler sampler(spec.hurst, spec.grid, spec.method);
  if (info) *info = {sampler.method(), sampler.fell_back()};
  return sampler.sample(spec.seed, spec.dim);
}

HolderEstimate estimate_holder(const Path& p, int levels) {
  const auto& grid = p.grid();
  if (levels < 2 || levels > grid.levels()) {
    throw std::invalid_argument("estimate_holder needs 2 <= levels <= log2(N)");
  }
  std::vector<double> scale, size;
  bool degenerate = false;
  for (int m = 0; m < levels; ++m) {
    const Index h = Index(1) << m;
    double worst = 0.0;
    for (Index i = 0; i + h <= grid.n_steps(); i += h) worst = std::max(worst, p.increment(i, i + h).norm());
    if (worst == 0.0) {
      degenerate = true;
      break;
    }
    scale.push_back(std::log(static_cast<double>(h) * grid.step()));
    size.push_back(std::log(worst));
  }
  HolderEstimate out;
  if (degenerate) {
    out.exponent = std::numeric_limits<double>::infinity();
    out.degenerate = true;
    return out;
  }
  out.fit = fit_line(scale, size);
  out.exponent = out.fit.slope;
  return out;
}

namespace drivers {

std::vector<std::string> builtin_names() { return {"linear", "sine", "cosine", "circle", "parabola", "zero"}; }

Path builtin(const std::string& name, const Grid& grid) {
  if (name == "linear") return Path::sample(grid, 1, [](double t) { return VectorXd::Constant(1, t); });
  if (name == "sine") return Path::sample(grid, 1, [](double t) { return VectorXd::Constant(1, std::sin(t)); });
  if (name == "cosine") return Path::sample(grid, 1, [](double t) { return VectorXd::Constant(1, std::cos(t)); });
  if (name == "circle") return Path::sample(grid, 2, [](double t) { return VectorXd{{std::sin(t), std::cos(t)}}; });
  if (name == "parabola") return Path::sample(grid, 2, [](double t) { return VectorXd{{t, t * t}}; });
  if (name == "zero") return Path::constant(grid, VectorXd::Zero(1));
  throw std::invalid_argument("unknown builtin driver '" + name + "'");
}

}  // namespace drivers

}  // namespace rvolt
