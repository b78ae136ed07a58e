#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "calibre/error.hpp"
#include "calibre/monotone_map.hpp"

namespace calibre {

// Pool-adjacent-violators: weighted least-squares fit of a nondecreasing
// sequence to ys. Returns the fitted value at every input position.
// Empty weights mean unit weights.
inline std::vector<double> isotonic_fit_values(std::span<const double> ys,
                                               std::span<const double> weights = {}) {
  const std::size_t n = ys.size();
  if (n == 0) throw validation_error("isotonic regression needs at least one point");
  if (!weights.empty() && weights.size() != n)
    throw validation_error("isotonic weights must match point count");

  // Stack of merged blocks: (weighted sum, weight, member count).
  std::vector<double> sum, weight;
  std::vector<std::size_t> count;
  sum.reserve(n);
  weight.reserve(n);
  count.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (!(w > 0.0)) throw validation_error("isotonic weights must be positive");
    sum.push_back(ys[i] * w);
    weight.push_back(w);
    count.push_back(1);
    while (sum.size() > 1) {
      const std::size_t k = sum.size() - 1;
      if (sum[k - 1] * weight[k] <= sum[k] * weight[k - 1]) break;  // means ordered
      sum[k - 1] += sum[k];
      weight[k - 1] += weight[k];
      count[k - 1] += count[k];
      sum.pop_back();
      weight.pop_back();
      count.pop_back();
    }
  }

  std::vector<double> fitted;
  fitted.reserve(n);
  for (std::size_t b = 0; b < sum.size(); ++b) {
    const double level = sum[b] / weight[b];
    for (std::size_t c = 0; c < count[b]; ++c) fitted.push_back(level);
  }
  return fitted;
}

// Isotonic fit of (x, y) points as a MonotoneMap. Points are ordered by x
// (stable in the input order for equal x); ties in x are pre-averaged with
// summed weights before PAVA so the knot x values are strictly increasing.
inline MonotoneMap fit_isotonic(std::span<const double> xs,
                                std::span<const double> ys,
                                std::span<const double> weights = {},
                                MonotoneMap::Interp interp = MonotoneMap::Interp::linear) {
  const std::size_t n = xs.size();
  if (n == 0) throw validation_error("isotonic regression needs at least one point");
  if (ys.size() != n) throw validation_error("isotonic x/y size mismatch");
  if (!weights.empty() && weights.size() != n)
    throw validation_error("isotonic weights must match point count");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (xs[a] != xs[b]) return xs[a] < xs[b];
    return a < b;
  });

  std::vector<double> ux, uy, uw;
  ux.reserve(n);
  uy.reserve(n);
  uw.reserve(n);
  std::size_t i = 0;
  while (i < n) {
    const double x = xs[order[i]];
    double wsum = 0.0, ysum = 0.0;
    for (; i < n && xs[order[i]] == x; ++i) {
      const double w = weights.empty() ? 1.0 : weights[order[i]];
      if (!(w > 0.0)) throw validation_error("isotonic weights must be positive");
      wsum += w;
      ysum += ys[order[i]] * w;
    }
    ux.push_back(x);
    uy.push_back(ysum / wsum);
    uw.push_back(wsum);
  }

  return MonotoneMap(std::move(ux), isotonic_fit_values(uy, uw), interp);
}

}  // namespace calibre
