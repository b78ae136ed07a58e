#pragma once

#include <cmath>
#include <cstddef>

#include "calibre/error.hpp"
#include "calibre/forecast.hpp"
#include "calibre/math.hpp"
#include "calibre/metrics.hpp"

namespace calibre {

// Single-factor recalibration of predicted STDs, fitted by Gaussian NLL
// minimization on a recalibration set.
struct ScalingCalibrator {
  double s = 1.0;
  double nll_before = 0.0;
  double nll_after = 0.0;
  std::size_t fit_count = 0;
};

// Rescales every sigma by cal.s; mu and y are untouched.
inline ForecastSet apply_scaling(const ScalingCalibrator& cal, const ForecastSet& set) {
  ForecastSet out;
  out.label = set.label;
  out.records.reserve(set.size());
  for (const auto& r : set.records)
    out.records.push_back({r.mu, cal.s * r.sigma, r.y});
  return out;
}

// Fits the scaling factor in closed form:
//   s = sqrt( (1/T) * sum_t (y_t - mu_t)^2 / sigma_t^2 ),
// the unique stationary point of the Gaussian NLL in s (the NLL is strictly
// convex in log s, so this is the global minimum).
inline ScalingCalibrator fit_std_scaling(const ForecastSet& recal) {
  const std::size_t t = recal.size();
  if (t < 2) throw validation_error("scaling fit needs at least 2 records");
  const double mean_ratio = pairwise_sum(t, [&](std::size_t i) {
                              const auto& r = recal.records[i];
                              const double d = (r.y - r.mu) / r.sigma;
                              return d * d;
                            }) /
                            static_cast<double>(t);
  if (!(mean_ratio > 0.0))
    throw numerical_error("degenerate: zero residuals");
  if (!std::isfinite(mean_ratio))
    throw numerical_error("scaling fit overflowed");

  ScalingCalibrator cal;
  cal.s = std::sqrt(mean_ratio);
  cal.fit_count = t;
  cal.nll_before = mean_nll(recal);
  cal.nll_after = mean_nll(apply_scaling(cal, recal));
  return cal;
}

}  // namespace calibre
