#pragma once

#include <vector>

#include "ksynth/types.hpp"

namespace ksynth {

struct LinearFit {
  Real slope = 0.0;
  Real intercept = 0.0;
  Real residual = 0.0;  // RMS of the fit residuals
  int points = 0;
};

/// Ordinary least squares y = slope * x + intercept. Needs >= 2 points.
LinearFit fit_line(const std::vector<Real>& x, const std::vector<Real>& y);

/// Spearman rank correlation with average ranks for ties.
Real spearman_rho(const std::vector<Real>& x, const std::vector<Real>& y);

Real mean(const std::vector<Real>& v);
Real stddev(const std::vector<Real>& v);  // sample (n-1), 0 for n < 2

}  // namespace ksynth
