#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "calibre/error.hpp"

namespace calibre {

struct Moments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
};

namespace detail {

inline constexpr int kRombergMaxRows = 28;

// Romberg integration of a two-component integrand over [a, b]. Both
// components come out of a single call to f, so the expensive shared term
// (one CDF evaluation) is computed once per abscissa. Depth k uses 2^k
// panels; the check against the previous diagonal entry starts at
// min_depth and the call throws once max_depth refinements were not
// enough.
template <class F2>
std::array<double, 2> romberg_pair(F2&& f, double a, double b, double rel_tol,
                                   std::array<double, 2> abs_tol, int min_depth, int max_depth) {
  using Pair = std::array<double, 2>;
  static_assert(kRombergMaxRows > 0);
  if (max_depth + 1 > kRombergMaxRows) throw validation_error("romberg depth out of range");
  const double h0 = b - a;
  if (!(h0 > 0.0)) return {0.0, 0.0};

  std::array<Pair, kRombergMaxRows> prev{};
  std::array<Pair, kRombergMaxRows> cur{};
  const Pair fa = f(a);
  const Pair fb = f(b);
  prev[0] = {0.5 * h0 * (fa[0] + fb[0]), 0.5 * h0 * (fa[1] + fb[1])};

  for (int k = 1; k <= max_depth; ++k) {
    const std::size_t panels = std::size_t{1} << k;
    const double h = h0 / static_cast<double>(panels);
    Pair mid = {0.0, 0.0};
    for (std::size_t i = 1; i < panels; i += 2) {
      const Pair v = f(a + h * static_cast<double>(i));
      mid[0] += v[0];
      mid[1] += v[1];
    }
    cur[0] = {0.5 * prev[0][0] + h * mid[0], 0.5 * prev[0][1] + h * mid[1]};
    double pow4 = 1.0;
    for (int j = 1; j <= k; ++j) {
      pow4 *= 4.0;
      cur[j] = {cur[j - 1][0] + (cur[j - 1][0] - prev[j - 1][0]) / (pow4 - 1.0),
                cur[j - 1][1] + (cur[j - 1][1] - prev[j - 1][1]) / (pow4 - 1.0)};
    }
    if (k >= min_depth) {
      const Pair& best = cur[static_cast<std::size_t>(k)];
      const Pair& before = prev[static_cast<std::size_t>(k - 1)];
      bool settled = std::isfinite(best[0]) && std::isfinite(best[1]);
      for (int c = 0; c < 2 && settled; ++c) {
        const double err = std::abs(best[c] - before[c]);
        if (err > rel_tol * std::abs(best[c]) + abs_tol[c]) settled = false;
      }
      if (settled) return cur[static_cast<std::size_t>(k)];
    }
    prev = cur;
  }
  throw numerical_error("moment integral did not converge");
}

}  // namespace detail

// Mean and variance of the distribution behind a CDF, read off the CDF
// alone:
//
//   E[X]   =   int_0^inf (1 - F(u)) du  -  int_-inf^0 F(u) du
//   E[X^2] = 2 int_0^inf u (1 - F(u)) du - 2 int_-inf^0 u F(u) du
//
// The base range is center_hint +/- 12 * scale_hint (widened to touch 0 so
// the split point is always inside). Beyond it the integrals are extended
// with doubling strips; a distribution whose tail keeps contributing after
// six doublings has no usable second moment and is reported as
// non-convergent rather than silently truncated.
template <class F>
Moments moments_from_cdf(F&& cdf, double center_hint, double scale_hint) {
  if (!std::isfinite(center_hint)) throw validation_error("moment extraction: non-finite center hint");
  if (!(scale_hint > 0.0) || !std::isfinite(scale_hint))
    throw validation_error("moment extraction: scale hint must be positive and finite");

  // An isotonic map fitted on T points puts kinks at every knot quantile;
  // resolving them to the 1e-8 stopping rule takes depth ~22 at T = 6,000,
  // so the cap leaves a few extra doublings of headroom.
  constexpr double kRelTol = 1e-8;
  constexpr int kMinDepth = 6;
  constexpr int kMaxDepth = 26;
  constexpr int kMaxTailExtensions = 6;

  const double span = 12.0 * scale_hint;
  const double lo = std::min(0.0, center_hint - span);
  const double hi = std::max(0.0, center_hint + span);

  auto upper = [&](double u) -> std::array<double, 2> {
    const double tail = 1.0 - cdf(u);
    return {tail, u * tail};
  };
  auto lower = [&](double u) -> std::array<double, 2> {
    const double c = cdf(u);
    return {c, u * c};
  };

  const std::array<double, 2> abs_tol = {1e-12 * scale_hint, 1e-12 * scale_hint * scale_hint};

  std::array<double, 2> pos =
      detail::romberg_pair(upper, 0.0, hi, kRelTol, abs_tol, kMinDepth, kMaxDepth);
  std::array<double, 2> neg =
      detail::romberg_pair(lower, lo, 0.0, kRelTol, abs_tol, kMinDepth, kMaxDepth);

  auto extend = [&](auto&& integrand, double edge, int direction, std::array<double, 2>& total) {
    double width = span;
    double at = edge;
    for (int e = 0; e < kMaxTailExtensions; ++e) {
      const double a = direction > 0 ? at : at - width;
      const double b = direction > 0 ? at + width : at;
      const std::array<double, 2> strip =
          detail::romberg_pair(integrand, a, b, kRelTol, abs_tol, kMinDepth, kMaxDepth);
      total[0] += strip[0];
      total[1] += strip[1];
      const double floor0 = 1e-9 * std::max(scale_hint, std::abs(total[0]));
      const double floor1 = 1e-9 * std::max(scale_hint * scale_hint, std::abs(total[1]));
      if (std::abs(strip[0]) <= floor0 && std::abs(strip[1]) <= floor1) return;
      at = direction > 0 ? b : a;
      width *= 2.0;
    }
    throw numerical_error("moment integral did not converge");
  };

  extend(upper, hi, +1, pos);
  extend(lower, lo, -1, neg);

  Moments m;
  m.mean = pos[0] - neg[0];
  m.second_moment = 2.0 * (pos[1] - neg[1]);
  m.variance = m.second_moment - m.mean * m.mean;
  if (!std::isfinite(m.mean) || !std::isfinite(m.variance))
    throw numerical_error("moment integral did not converge");
  if (m.variance < 0.0) {
    if (m.variance < -1e-8 * std::max(1.0, scale_hint * scale_hint))
      throw numerical_error("moment extraction produced a negative variance");
    m.variance = 0.0;
  }
  return m;
}

}  // namespace calibre
