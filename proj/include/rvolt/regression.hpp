#pragma once

#include <span>
#include <vector>

namespace rvolt {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual of the fit.
  double residual = 0.0;
};

/// Ordinary least squares y ~ slope * x + intercept. Needs at least two distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Fits log(error) against log(1/h): a positive slope means errors decay as the
/// resolution n grows, error ~ n^{-slope}.
LinearFit fit_rate(std::span<const double> resolutions, std::span<const double> errors);

}  // namespace rvolt
