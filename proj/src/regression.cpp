#include "rvolt/regression.hpp"

#include <cmath>
#include <stdexcept>

namespace rvolt {

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line needs at least two (x, y) pairs of equal length");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

LinearFit fit_rate(std::span<const double> resolutions, std::span<const double> errors) {
  std::vector<double> lx, ly;
  lx.reserve(resolutions.size());
  ly.reserve(errors.size());
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    if (!(errors[i] > 0.0) || !(resolutions[i] > 0.0)) {
      throw std::invalid_argument("fit_rate needs positive resolutions and errors");
    }
    lx.push_back(std::log(resolutions[i]));
    ly.push_back(-std::log(errors[i]));
  }
  return fit_line(lx, ly);
}

}  // namespace rvolt
