#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace bdsmp {

// Neumaier compensated summation.
inline double compensated_sum(const std::vector<double>& xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + c;
}

// Normalized weights w_0..w_{n-1} given successive ratios w_i / w_{i-1}
// (ratios[0] is ignored). Switches to log space when ratios are extreme.
inline std::vector<double> normalized_chain(const std::vector<double>& ratios) {
  const std::size_t n = ratios.size();
  std::vector<double> w(n, 1.0);
  bool extreme = false;
  for (std::size_t i = 1; i < n; ++i) {
    const double r = ratios[i];
    if (!(r > 1e-12 && r < 1e12)) extreme = true;
    w[i] = w[i - 1] * r;
    if (!(w[i] > 1e-280 && w[i] < 1e280)) extreme = true;
  }
  if (extreme) {
    std::vector<double> lw(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) lw[i] = lw[i - 1] + std::log(ratios[i]);
    const double top = *std::max_element(lw.begin(), lw.end());
    for (std::size_t i = 0; i < n; ++i) w[i] = std::exp(lw[i] - top);
  }
  const double s = compensated_sum(w);
  for (double& x : w) x /= s;
  return w;
}

}  // namespace bdsmp
