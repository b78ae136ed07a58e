#pragma once

// Independent reference implementations the tests check the library
// against. Deliberately brute-force and slow: their job is to be obviously
// correct, not fast.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "calibre/forecast.hpp"
#include "calibre/metrics.hpp"
#include "calibre/rng.hpp"
#include "calibre/scaling.hpp"

namespace oracle {

struct MonotoneFit {
  std::vector<double> fitted;
  double sse = 0.0;
};

// Exact weighted monotone least squares for small n: enumerate every
// contiguous block partition (2^(n-1) of them), give each block its
// weighted mean, and keep the best partition whose block means are
// nondecreasing. The optimum is always of this form.
inline MonotoneFit brute_force_isotonic(const std::vector<double>& ys,
                                        const std::vector<double>& ws) {
  const std::size_t n = ys.size();
  MonotoneFit best;
  best.sse = std::numeric_limits<double>::infinity();
  for (std::uint32_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
    std::vector<double> fit(n);
    double sse = 0.0;
    bool feasible = true;
    double prev_mean = -std::numeric_limits<double>::infinity();
    std::size_t start = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool block_ends = i + 1 == n || (cuts >> i) & 1u;
      if (!block_ends) continue;
      double wsum = 0.0, wysum = 0.0;
      for (std::size_t k = start; k <= i; ++k) {
        wsum += ws[k];
        wysum += ws[k] * ys[k];
      }
      const double mean = wysum / wsum;
      if (mean < prev_mean) {
        feasible = false;
        break;
      }
      for (std::size_t k = start; k <= i; ++k) {
        fit[k] = mean;
        const double d = ys[k] - mean;
        sse += ws[k] * d * d;
      }
      prev_mean = mean;
      start = i + 1;
    }
    if (feasible && sse < best.sse) {
      best.sse = sse;
      best.fitted = fit;
    }
  }
  return best;
}

inline double weighted_sse(const std::vector<double>& ys, const std::vector<double>& fit,
                           const std::vector<double>& ws) {
  double sse = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double d = ys[i] - fit[i];
    sse += ws[i] * d * d;
  }
  return sse;
}

// Derivative-free 1-D minimizer of the mean NLL over the scaling factor,
// used to cross-check the closed form. Golden-section on [lo, hi].
inline double golden_section_scaling(const calibre::ForecastSet& set, double lo, double hi) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto nll_at = [&](double s) {
    calibre::ScalingCalibrator cal;
    cal.s = s;
    return calibre::mean_nll(calibre::apply_scaling(cal, set));
  };
  double a = lo, b = hi;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = nll_at(c), fd = nll_at(d);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * b; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = nll_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = nll_at(d);
    }
  }
  return (a + b) / 2.0;
}

// Random but reproducible forecast set with varied scales.
inline calibre::ForecastSet random_set(std::uint64_t seed, std::size_t t) {
  calibre::ForecastSet set;
  set.label = "test";
  set.records.reserve(t);
  for (std::size_t i = 0; i < t; ++i) {
    calibre::rng::Stream s(seed, calibre::rng::kDomainTest, i);
    const double mu = s.next_uniform(-5.0, 5.0);
    const double sigma = std::exp(s.next_uniform(-2.0, 2.0));
    const double y = mu + sigma * s.next_uniform(0.3, 1.8) * s.next_normal();
    set.records.push_back({mu, sigma, y});
  }
  return set;
}

}  // namespace oracle
