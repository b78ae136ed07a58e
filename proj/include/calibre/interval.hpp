#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "calibre/cdf.hpp"
#include "calibre/error.hpp"
#include "calibre/forecast.hpp"
#include "calibre/isotonic.hpp"
#include "calibre/math.hpp"
#include "calibre/monotone_map.hpp"
#include "calibre/parallel.hpp"
#include "calibre/romberg.hpp"

namespace calibre {

// Probability-integral-transform values p_t = F_t(y_t), one per record.
struct PitSample {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

inline PitSample pit(const ForecastSet& set) {
  PitSample out;
  out.values.reserve(set.size());
  for (const auto& r : set.records) out.values.push_back(normal_cdf((r.y - r.mu) / r.sigma));
  return out;
}

// PIT under the recalibrated forecast (R o F_t)(y_t).
inline PitSample pit(const ForecastSet& set, const MonotoneMap& map) {
  PitSample out;
  out.values.reserve(set.size());
  for (const auto& r : set.records)
    out.values.push_back(map.unit(normal_cdf((r.y - r.mu) / r.sigma)));
  return out;
}

// Arbitrary forecast CDFs paired with their observations.
template <class CdfLike>
PitSample pit(const std::vector<CdfLike>& cdfs, const std::vector<double>& ys) {
  if (cdfs.size() != ys.size()) throw validation_error("pit: cdf and observation counts differ");
  PitSample out;
  out.values.reserve(cdfs.size());
  for (std::size_t i = 0; i < cdfs.size(); ++i) out.values.push_back(cdfs[i](ys[i]));
  return out;
}

namespace detail {

inline std::vector<double> sorted_unit_values(const PitSample& sample, const char* what) {
  std::vector<double> sorted = sample.values;
  std::sort(sorted.begin(), sorted.end());
  if (!sorted.empty() && (!(sorted.front() >= 0.0) || !(sorted.back() <= 1.0)))
    throw validation_error(std::string(what) + ": pit values outside [0,1]");
  return sorted;
}

}  // namespace detail

// Raw empirical-CDF points: for every p_t, the fraction of the sample at or
// below it. Order follows the input sample; x may contain ties.
struct CdfPoints {
  std::vector<double> x;
  std::vector<double> y;
};

inline CdfPoints empirical_cdf(const PitSample& sample) {
  const std::size_t t = sample.size();
  if (t == 0) throw validation_error("empirical cdf of empty pit sample");
  const std::vector<double> sorted = detail::sorted_unit_values(sample, "empirical_cdf");
  CdfPoints out;
  out.x = sample.values;
  out.y.reserve(t);
  for (const double p : sample.values) {
    const auto at_or_below = std::upper_bound(sorted.begin(), sorted.end(), p) - sorted.begin();
    out.y.push_back(static_cast<double>(at_or_below) / static_cast<double>(t));
  }
  return out;
}

// Interval-based recalibration: isotonic fit of the empirical CDF over the
// PIT values of the recalibration set. The fitted map is anchored at (0,0)
// and (1,1) so its composition with any base CDF is again a CDF with full
// range; anchors are skipped when a PIT value already sits on the boundary.
inline MonotoneMap recalibrate_interval(const ForecastSet& recal,
                                        MonotoneMap::Interp interp = MonotoneMap::Interp::linear) {
  if (recal.size() < 2) throw validation_error("interval recalibration needs at least 2 records");
  const CdfPoints points = empirical_cdf(pit(recal));
  const std::vector<double> weights(points.x.size(), 1.0);
  const MonotoneMap fitted = fit_isotonic(points.x, points.y, weights, interp);

  std::vector<double> xs = fitted.xs();
  std::vector<double> ys = fitted.ys();
  if (xs.front() > 0.0) {
    xs.insert(xs.begin(), 0.0);
    ys.insert(ys.begin(), 0.0);
  }
  if (xs.back() < 1.0) {
    xs.push_back(1.0);
    ys.push_back(1.0);
  }
  return MonotoneMap(std::move(xs), std::move(ys), interp);
}

// Coverage curve on the fixed grid p in {0.05, 0.10, ..., 0.95}.
struct IntervalCalibrationPlot {
  std::vector<double> p;
  std::vector<double> p_hat;
  double max_abs_deviation = 0.0;
};

inline IntervalCalibrationPlot calibration_plot(const MonotoneMap& map, const ForecastSet& holdout) {
  if (holdout.size() == 0) throw validation_error("calibration plot needs a nonempty holdout set");
  const std::vector<double> sorted = detail::sorted_unit_values(pit(holdout, map), "calibration_plot");
  const double t = static_cast<double>(sorted.size());
  IntervalCalibrationPlot plot;
  plot.p.reserve(19);
  plot.p_hat.reserve(19);
  for (int i = 1; i <= 19; ++i) {
    const double level = static_cast<double>(i) / 20.0;
    const auto covered = std::upper_bound(sorted.begin(), sorted.end(), level) - sorted.begin();
    const double hat = static_cast<double>(covered) / t;
    plot.p.push_back(level);
    plot.p_hat.push_back(hat);
    plot.max_abs_deviation = std::max(plot.max_abs_deviation, std::abs(hat - level));
  }
  return plot;
}

// One-sample Kolmogorov-Smirnov test against Uniform[0,1]; passes at the
// asymptotic 5% level iff the statistic is below 1.358/sqrt(T).
struct KsResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  bool pass_at_05 = false;
};

inline KsResult ks_uniformity(const PitSample& sample) {
  const std::size_t t = sample.size();
  if (t < 10) throw validation_error("ks uniformity test needs at least 10 values");
  const std::vector<double> sorted = detail::sorted_unit_values(sample, "ks_uniformity");
  double d = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    const double hi = static_cast<double>(i + 1) / static_cast<double>(t) - sorted[i];
    const double lo = sorted[i] - static_cast<double>(i) / static_cast<double>(t);
    d = std::max(d, std::max(hi, lo));
  }
  KsResult res;
  res.statistic = d;
  res.critical_value = 1.358 / std::sqrt(static_cast<double>(t));
  res.pass_at_05 = res.statistic < res.critical_value;
  return res;
}

// Moment extraction across a whole set of recalibrated Gaussian forecasts.
// Every record's recalibrated CDF is R(Phi((u - mu)/sigma)): one affine
// family. The canonical member R(Phi(z)) is integrated once, and each
// record's moments follow exactly as mu + sigma * E[Z] and sigma^2 * Var[Z]
// (change of variables u = mu + sigma * z). Integrating per record would
// redo the same expensive quadrature T times for the identical shape.
//
// The skipped list reports input row indices dropped because their moments
// were unusable; with the shared canonical integral failures are
// all-or-nothing, so it stays empty on success.
struct MomentExtractionResult {
  ForecastSet set;
  std::vector<std::size_t> skipped;
};

inline MomentExtractionResult extract_recalibrated_moments(const ForecastSet& input,
                                                           const MonotoneMap& map) {
  const std::size_t t = input.size();
  if (t == 0) throw validation_error("moment extraction on empty set");
  if (map.interp() == MonotoneMap::Interp::step)
    throw validation_error(
        "moment extraction needs a linear-interpolation map: a step map has atoms and no "
        "quadrature-friendly CDF");
  const Moments canon =
      moments_from_cdf([&map](double z) { return map.unit(normal_cdf(z)); }, 0.0, 1.0);
  if (!(canon.variance > 0.0))
    throw numerical_error("recalibrated variance collapsed to zero");
  const double spread = std::sqrt(canon.variance);

  MomentExtractionResult out;
  out.set.label = input.label;
  out.set.records.resize(t);
  parallel_for(t, [&](std::size_t i) {
    const ForecastRecord& r = input.records[i];
    out.set.records[i] = {r.mu + r.sigma * canon.mean, r.sigma * spread, r.y};
  });
  return out;
}

}  // namespace calibre
