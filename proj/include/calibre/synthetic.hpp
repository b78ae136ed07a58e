#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "calibre/error.hpp"
#include "calibre/forecast.hpp"
#include "calibre/interval.hpp"
#include "calibre/math.hpp"
#include "calibre/parallel.hpp"
#include "calibre/rng.hpp"

namespace calibre {

// Heteroscedastic toy regression: inputs x ~ U[0.1, 1], targets
// y ~ N(x, x^2) so the true conditional std equals x. The predicted mean is
// the true one; the three kinds differ only in the predicted std:
// the true std, an independent U[1,10] draw, or the true std shrunk by a
// factor (an overconfident forecaster).
struct SyntheticScenario {
  enum class Kind { oracle_uncertainty, random_uncertainty, overconfident_by_factor };

  Kind kind = Kind::oracle_uncertainty;
  std::size_t t = 0;
  std::uint64_t seed = 0;
  double factor = 1.0;  // only read for overconfident_by_factor

  static SyntheticScenario oracle(std::size_t t, std::uint64_t seed) {
    return {Kind::oracle_uncertainty, t, seed, 1.0};
  }
  static SyntheticScenario random(std::size_t t, std::uint64_t seed) {
    return {Kind::random_uncertainty, t, seed, 1.0};
  }
  static SyntheticScenario overconfident(std::size_t t, std::uint64_t seed, double factor) {
    return {Kind::overconfident_by_factor, t, seed, factor};
  }
};

inline const char* scenario_name(SyntheticScenario::Kind kind) {
  switch (kind) {
    case SyntheticScenario::Kind::oracle_uncertainty: return "oracle";
    case SyntheticScenario::Kind::random_uncertainty: return "random";
    case SyntheticScenario::Kind::overconfident_by_factor: return "overconfident";
  }
  return "unknown";
}

// One substream per record keyed by (seed, domain, index): the draw for
// record i never depends on how many workers produced the others, so a
// fixed seed gives bit-identical sets on any schedule.
inline ForecastSet generate_synthetic(const SyntheticScenario& sc) {
  if (sc.t < 1) throw validation_error("scenario needs at least 1 sample");
  if (sc.kind == SyntheticScenario::Kind::overconfident_by_factor &&
      (!(sc.factor > 0.0) || !std::isfinite(sc.factor)))
    throw validation_error("overconfidence factor must be positive and finite");

  ForecastSet set;
  set.label = scenario_name(sc.kind);
  set.records.resize(sc.t);
  parallel_for(sc.t, [&](std::size_t i) {
    rng::Stream stream(sc.seed, rng::kDomainSynthetic, i);
    const double x = stream.next_uniform(0.1, 1.0);
    const double y = x + x * stream.next_normal();
    double sigma = x;
    switch (sc.kind) {
      case SyntheticScenario::Kind::oracle_uncertainty: break;
      case SyntheticScenario::Kind::random_uncertainty:
        sigma = stream.next_uniform(1.0, 10.0);
        break;
      case SyntheticScenario::Kind::overconfident_by_factor:
        sigma = x / sc.factor;
        break;
    }
    set.records[i] = {x, sigma, y};
  });
  return set;
}

// The analytic counterexample to interval-based calibration: y ~ N(0,1)
// and a Cauchy forecast whose scale gamma = |z|, z ~ N(0,1), is drawn
// independently of y. The PIT value 1/2 + arctan(y/gamma)/pi is exactly
// uniform even though the forecast knows nothing about the error.
struct CauchyCounterexampleSample {
  std::vector<double> y;
  std::vector<double> gamma;
  PitSample pits;
  std::uint64_t seed = 0;

  std::size_t size() const { return y.size(); }
};

inline CauchyCounterexampleSample generate_cauchy_counterexample(std::size_t t,
                                                                 std::uint64_t seed) {
  if (t < 10) throw validation_error("counterexample needs at least 10 samples");
  CauchyCounterexampleSample out;
  out.seed = seed;
  out.y.resize(t);
  out.gamma.resize(t);
  out.pits.values.resize(t);
  parallel_for(t, [&](std::size_t i) {
    rng::Stream stream(seed, rng::kDomainCauchy, i);
    const double y = stream.next_normal();
    double z = stream.next_normal();
    while (z == 0.0) z = stream.next_normal();
    const double gamma = std::abs(z);
    out.y[i] = y;
    out.gamma[i] = gamma;
    out.pits.values[i] = 0.5 + std::atan(y / gamma) / kPi;
  });
  return out;
}

// Seeded disjoint split into a recalibration part and a validation part.
// Membership comes from a Fisher-Yates shuffle of the indices; both parts
// keep the original record order so the split is stable and reproducible.
struct SplitResult {
  ForecastSet recal;
  ForecastSet val;
};

inline SplitResult split_forecast_set(const ForecastSet& set, std::size_t recal_count,
                                      std::uint64_t seed) {
  const std::size_t t = set.size();
  if (recal_count < 1 || recal_count >= t)
    throw validation_error("split must leave both parts nonempty");
  std::vector<std::size_t> order(t);
  for (std::size_t i = 0; i < t; ++i) order[i] = i;
  rng::Stream stream(seed, rng::kDomainSplit, 0);
  for (std::size_t i = t - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(stream.next_below(i + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<unsigned char> in_recal(t, 0);
  for (std::size_t i = 0; i < recal_count; ++i) in_recal[order[i]] = 1;

  SplitResult split;
  split.recal.label = "recalibration";
  split.val.label = "validation";
  split.recal.records.reserve(recal_count);
  split.val.records.reserve(t - recal_count);
  for (std::size_t i = 0; i < t; ++i)
    (in_recal[i] ? split.recal : split.val).records.push_back(set.records[i]);
  return split;
}

}  // namespace calibre
