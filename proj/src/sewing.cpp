#include "rvolt/sewing.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace rvolt {

namespace {

// B_{2j} / (2j)! for j = 1..6.
constexpr std::array<double, 6> kBernoulliOverFactorial = {
    1.0 / 12.0,          -1.0 / 720.0,          1.0 / 30240.0,
    -1.0 / 1209600.0,    1.0 / 47900160.0,     -691.0 / 1307674368000.0};

// Euler-Maclaurin tail sum_{k>=K} k^{-mu}; `last_term` receives the magnitude of
// the final correction used.
double zeta_tail(double mu, double k, double& last_term) {
  double tail = std::pow(k, 1.0 - mu) / (mu - 1.0) + 0.5 * std::pow(k, -mu);
  // rising = mu (mu+1) ... (mu+2j-2), power = K^{-mu-2j+1}
  double rising = mu;
  double power = std::pow(k, -mu - 1.0);
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    last_term = kBernoulliOverFactorial[j] * rising * power;
    tail += last_term;
    const double m = static_cast<double>(2 * j + 1);
    rising *= (mu + m) * (mu + m + 1.0);
    power /= k * k;
  }
  last_term = std::abs(last_term);
  return tail;
}

}  // namespace

double zeta_series(double mu) {
  if (!(mu > 1.0)) throw std::invalid_argument("zeta series requires mu > 1");
  double partial = 0.0;
  for (int k = 1;; ++k) {
    double last = 0.0;
    const double tail = zeta_tail(mu, static_cast<double>(k), last);
    if (last < 1e-12 * (partial + tail) || k >= 1000000) return partial + tail;
    partial += std::pow(static_cast<double>(k), -mu);
  }
}

double sewing_constant(double mu) { return 2.0 + std::pow(2.0, mu) * zeta_series(mu); }

}  // namespace rvolt
