#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "calibre/error.hpp"

namespace calibre {

// Nondecreasing piecewise map defined by knots with strictly increasing x.
// Evaluation interpolates between knots (linear by default, or as a
// right-continuous step function) and extends with the boundary knot value
// outside the knot range. unit() additionally clamps the output to [0,1]
// for use as a probability transform.
class MonotoneMap {
 public:
  enum class Interp { linear, step };

  MonotoneMap(std::vector<double> xs, std::vector<double> ys,
              Interp interp = Interp::linear)
      : xs_(std::move(xs)), ys_(std::move(ys)), interp_(interp) {
    if (xs_.empty() || xs_.size() != ys_.size())
      throw validation_error("monotone map needs matching nonempty knot vectors");
    for (std::size_t i = 0; i < xs_.size(); ++i) {
      if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i]))
        throw validation_error("non-finite knot at index " + std::to_string(i));
      if (i > 0 && !(xs_[i] > xs_[i - 1]))
        throw validation_error("knot x not strictly increasing at index " +
                               std::to_string(i));
      if (i > 0 && ys_[i] < ys_[i - 1])
        throw validation_error("knot y decreasing at index " + std::to_string(i));
    }
  }

  static MonotoneMap identity(Interp interp = Interp::linear) {
    return MonotoneMap({0.0, 1.0}, {0.0, 1.0}, interp);
  }

  double operator()(double x) const {
    if (x <= xs_.front()) return ys_.front();
    if (x >= xs_.back()) return ys_.back();
    // First knot strictly to the right of x.
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
    const std::size_t lo = hi - 1;
    if (interp_ == Interp::step) return ys_[lo];
    const double t = (x - xs_[lo]) / (xs_[hi] - xs_[lo]);
    return ys_[lo] + t * (ys_[hi] - ys_[lo]);
  }

  // Evaluation clamped into [0,1].
  double unit(double x) const { return std::clamp((*this)(x), 0.0, 1.0); }

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  Interp interp() const { return interp_; }
  std::size_t size() const { return xs_.size(); }

 private:
  std::vector<double> xs_;
  std::vector<double> ys_;
  Interp interp_;
};

}  // namespace calibre
