#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstddef>

#include "calibre/error.hpp"
#include "calibre/forecast.hpp"
#include "calibre/metrics.hpp"
#include "calibre/scaling.hpp"
#include "calibre/synthetic.hpp"
#include "oracle_utils.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("scaling fit is exactly 1 on unit standardized residuals") {
  calibre::ForecastSet set;
  for (int i = 0; i < 64; ++i) {
    const double sigma = 0.5 + 0.1 * i;
    set.records.push_back({1.0 * i, sigma, 1.0 * i + sigma});
  }
  const calibre::ScalingCalibrator cal = calibre::fit_std_scaling(set);
  REQUIRE(cal.s == 1.0);
  REQUIRE(cal.fit_count == 64);
  REQUIRE(cal.nll_after == cal.nll_before);
}

TEST_CASE("scaling fit recovers a constant residual magnitude") {
  // sigma = 1 everywhere, |y - mu| = 3 everywhere: s = 3 exactly.
  calibre::ForecastSet set;
  for (int i = 0; i < 32; ++i) set.records.push_back({2.0 * i, 1.0, 2.0 * i + 3.0});
  REQUIRE(calibre::fit_std_scaling(set).s == 3.0);
}

TEST_CASE("closed-form factor matches a derivative-free minimizer") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const calibre::ForecastSet set = oracle::random_set(seed, 200);
    const double closed = calibre::fit_std_scaling(set).s;
    const double searched = oracle::golden_section_scaling(set, closed / 8.0, closed * 8.0);
    REQUIRE_THAT(searched, WithinRel(closed, 1e-6));
  }
}

TEST_CASE("refitting a rescaled set gives factor 1") {
  for (const std::uint64_t seed : {3u, 11u, 29u}) {
    const calibre::ForecastSet set = oracle::random_set(seed, 500);
    const calibre::ScalingCalibrator cal = calibre::fit_std_scaling(set);
    const calibre::ForecastSet scaled = calibre::apply_scaling(cal, set);
    REQUIRE_THAT(calibre::fit_std_scaling(scaled).s, WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("fitted factor never increases the NLL") {
  for (std::uint64_t seed = 200; seed < 220; ++seed) {
    const calibre::ScalingCalibrator cal =
        calibre::fit_std_scaling(oracle::random_set(seed, 150));
    REQUIRE(cal.nll_after <= cal.nll_before + 1e-12);
  }
}

TEST_CASE("apply_scaling with factor 1 reproduces the input bits") {
  const calibre::ForecastSet set = oracle::random_set(7, 100);
  calibre::ScalingCalibrator unit;
  unit.s = 1.0;
  const calibre::ForecastSet out = calibre::apply_scaling(unit, set);
  REQUIRE(out.records == set.records);
  REQUIRE(out.label == set.label);
}

TEST_CASE("apply_scaling touches only sigma") {
  const calibre::ForecastSet set = oracle::random_set(9, 50);
  calibre::ScalingCalibrator cal;
  cal.s = 2.5;
  const calibre::ForecastSet out = calibre::apply_scaling(cal, set);
  for (std::size_t i = 0; i < set.size(); ++i) {
    REQUIRE(out.records[i].mu == set.records[i].mu);
    REQUIRE(out.records[i].y == set.records[i].y);
    REQUIRE(out.records[i].sigma == 2.5 * set.records[i].sigma);
  }
}

TEST_CASE("rescaling leaves the coefficient of variation unchanged") {
  const calibre::ForecastSet set = oracle::random_set(13, 400);
  const double before = calibre::coefficient_of_variation(set);
  for (const double s : {0.01, 0.5, 3.0, 250.0}) {
    calibre::ScalingCalibrator cal;
    cal.s = s;
    const double after = calibre::coefficient_of_variation(calibre::apply_scaling(cal, set));
    REQUIRE(std::fabs(after - before) < 1e-12);
  }
}

TEST_CASE("scaling fit rejects degenerate inputs") {
  calibre::ForecastSet tiny;
  tiny.records = {{0.0, 1.0, 0.0}};
  REQUIRE_THROWS_AS(calibre::fit_std_scaling(tiny), calibre::validation_error);

  calibre::ForecastSet flat;
  for (int i = 0; i < 10; ++i) flat.records.push_back({1.0, 2.0, 1.0});
  REQUIRE_THROWS_WITH(calibre::fit_std_scaling(flat), "degenerate: zero residuals");
}

TEST_CASE("scaling repairs a uniformly overconfident forecaster") {
  const calibre::ForecastSet truth =
      calibre::generate_synthetic(calibre::SyntheticScenario::oracle(5000, 77));
  calibre::ForecastSet shrunk = truth;
  for (auto& r : shrunk.records) r.sigma *= 0.5;

  const calibre::ScalingCalibrator cal = calibre::fit_std_scaling(shrunk);
  REQUIRE_THAT(cal.s, WithinAbs(2.0, 0.1));
  const double ence_before = calibre::evaluate(shrunk, 10).ence;
  const double ence_after = calibre::evaluate(calibre::apply_scaling(cal, shrunk), 10).ence;
  REQUIRE(ence_after < ence_before);
  REQUIRE(ence_after < 0.05);
}
