#include "ksynth/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ksynth {

LinearFit fit_line(const std::vector<Real>& x, const std::vector<Real>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  const auto n = x.size();
  if (n < 2) throw std::invalid_argument("fit_line: need at least 2 points");
  const Real mx = mean(x);
  const Real my = mean(y);
  Real sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissa");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  Real ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Real r = y[i] - (fit.slope * x[i] + fit.intercept);
    ssr += r * r;
  }
  fit.residual = std::sqrt(ssr / static_cast<Real>(n));
  fit.points = static_cast<int>(n);
  return fit;
}

namespace {

std::vector<Real> average_ranks(const std::vector<Real>& v) {
  const auto n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<Real> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const Real shared = (static_cast<Real>(i) + static_cast<Real>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

Real spearman_rho(const std::vector<Real>& x, const std::vector<Real>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman_rho: size mismatch");
  if (x.size() < 2) throw std::invalid_argument("spearman_rho: need at least 2 points");
  const std::vector<Real> rx = average_ranks(x);
  const std::vector<Real> ry = average_ranks(y);
  const Real mx = mean(rx);
  const Real my = mean(ry);
  Real sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;  // constant input has no ranking signal
  return sxy / std::sqrt(sxx * syy);
}

Real mean(const std::vector<Real>& v) {
  if (v.empty()) throw std::invalid_argument("mean: empty input");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<Real>(v.size());
}

Real stddev(const std::vector<Real>& v) {
  if (v.size() < 2) return 0.0;
  const Real m = mean(v);
  Real acc = 0.0;
  for (const Real x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<Real>(v.size() - 1));
}

}  // namespace ksynth
