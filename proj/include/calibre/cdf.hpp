#pragma once

#include <cmath>
#include <memory>
#include <utility>

#include "calibre/error.hpp"
#include "calibre/math.hpp"
#include "calibre/monotone_map.hpp"

namespace calibre {

// One-dimensional CDF of a predictive distribution. Implementations must
// be nondecreasing with limits 0 at -inf and 1 at +inf.
class Cdf {
 public:
  virtual ~Cdf() = default;
  virtual double operator()(double u) const = 0;
};

class GaussianCdf final : public Cdf {
 public:
  GaussianCdf(double mean, double stddev) : mean_(mean), stddev_(stddev) {
    if (!(stddev > 0.0) || !std::isfinite(stddev) || !std::isfinite(mean))
      throw validation_error("Gaussian CDF needs finite mean and positive stddev");
  }

  double operator()(double u) const override {
    return normal_cdf((u - mean_) / stddev_);
  }

  double mean() const { return mean_; }
  double stddev() const { return stddev_; }

 private:
  double mean_;
  double stddev_;
};

class CauchyCdf final : public Cdf {
 public:
  CauchyCdf(double location, double scale) : location_(location), scale_(scale) {
    if (!(scale > 0.0) || !std::isfinite(scale) || !std::isfinite(location))
      throw validation_error("Cauchy CDF needs finite location and positive scale");
  }

  double operator()(double u) const override {
    return 0.5 + std::atan((u - location_) / scale_) / kPi;
  }

 private:
  double location_;
  double scale_;
};

// Base CDF composed with a monotone map; output is clamped to [0,1] so the
// composition stays a valid CDF even if the raw map leaves the range.
class RecalibratedCdf final : public Cdf {
 public:
  RecalibratedCdf(std::shared_ptr<const Cdf> base, MonotoneMap map)
      : base_(std::move(base)), map_(std::move(map)) {
    if (!base_) throw validation_error("recalibrated CDF needs a base CDF");
  }

  double operator()(double u) const override { return map_.unit((*base_)(u)); }

  const Cdf& base() const { return *base_; }
  const MonotoneMap& map() const { return map_; }

 private:
  std::shared_ptr<const Cdf> base_;
  MonotoneMap map_;
};

}  // namespace calibre
