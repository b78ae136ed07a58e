#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "calibre/cdf.hpp"
#include "calibre/error.hpp"
#include "calibre/forecast.hpp"
#include "calibre/math.hpp"
#include "calibre/monotone_map.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
const double kNan = std::numeric_limits<double>::quiet_NaN();
}  // namespace

TEST_CASE("validate_and_load keeps order and label") {
  const std::vector<calibre::RawRow> rows{{1.0, 0.5, 1.2}, {-3.0, 2.0, -2.5}};
  const calibre::ForecastSet set = calibre::validate_and_load(rows, "demo");
  REQUIRE(set.size() == 2);
  REQUIRE(set.label == "demo");
  REQUIRE(set.records[0] == calibre::ForecastRecord{1.0, 0.5, 1.2});
  REQUIRE(set.records[1] == calibre::ForecastRecord{-3.0, 2.0, -2.5});
}

TEST_CASE("validate_and_load rejects bad rows with the row index") {
  using calibre::validation_error;
  REQUIRE_THROWS_WITH(calibre::validate_and_load({}), "empty input");
  REQUIRE_THROWS_WITH(calibre::validate_and_load({{0, 1, 0}, {kNan, 1, 0}}),
                      "non-finite mu at row 1");
  REQUIRE_THROWS_WITH(calibre::validate_and_load({{0, kInf, 0}}),
                      "non-finite sigma at row 0");
  REQUIRE_THROWS_WITH(calibre::validate_and_load({{0, 1, 0}, {0, 0.0, 0}}),
                      "non-positive sigma at row 1");
  REQUIRE_THROWS_WITH(calibre::validate_and_load({{0, -1.0, 0}}),
                      "non-positive sigma at row 0");
  REQUIRE_THROWS_WITH(calibre::validate_and_load({{0, 1, kNan}}),
                      "non-finite y at row 0");
  REQUIRE_THROWS_AS(calibre::validate_and_load({{0, 0.0, 0}}), validation_error);
}

TEST_CASE("normal cdf matches tabulated values") {
  REQUIRE(calibre::normal_cdf(0.0) == 0.5);
  REQUIRE_THAT(calibre::normal_cdf(1.0), WithinAbs(0.8413447460685429, 1e-15));
  REQUIRE_THAT(calibre::normal_cdf(-1.0), WithinAbs(0.15865525393145705, 1e-15));
  REQUIRE_THAT(calibre::normal_cdf(1.959963984540054), WithinAbs(0.975, 1e-15));
  REQUIRE(calibre::normal_cdf(-40.0) == 0.0);
  REQUIRE(calibre::normal_cdf(40.0) == 1.0);
}

TEST_CASE("normal quantile matches tabulated values and inverts the cdf") {
  REQUIRE(calibre::normal_quantile(0.5) == 0.0);
  REQUIRE_THAT(calibre::normal_quantile(0.975), WithinAbs(1.959963984540054, 1e-12));
  REQUIRE_THAT(calibre::normal_quantile(0.8413447460685429), WithinAbs(1.0, 1e-12));
  REQUIRE(calibre::normal_quantile(0.0) == -kInf);
  REQUIRE(calibre::normal_quantile(1.0) == kInf);

  for (int i = 1; i <= 99; ++i) {
    const double p = static_cast<double>(i) / 100.0;
    REQUIRE_THAT(calibre::normal_cdf(calibre::normal_quantile(p)), WithinAbs(p, 1e-13));
  }
  // Deep tails where the rational approximations switch branches.
  for (const double p : {1e-3, 1e-8, 1e-14, 1.0 - 1e-3, 1.0 - 1e-8}) {
    REQUIRE_THAT(calibre::normal_cdf(calibre::normal_quantile(p)), WithinRel(p, 1e-11));
  }
}

TEST_CASE("gaussian cdf object evaluates a shifted scaled normal") {
  const calibre::GaussianCdf g(3.0, 2.0);
  REQUIRE(g(3.0) == 0.5);
  REQUIRE_THAT(g(5.0), WithinAbs(0.8413447460685429, 1e-15));
  REQUIRE_THROWS_AS(calibre::GaussianCdf(0.0, 0.0), calibre::validation_error);
  REQUIRE_THROWS_AS(calibre::GaussianCdf(kNan, 1.0), calibre::validation_error);
  REQUIRE_THROWS_AS(calibre::GaussianCdf(0.0, -2.0), calibre::validation_error);
}

TEST_CASE("cauchy cdf hits the quartiles") {
  const calibre::CauchyCdf c(1.0, 2.0);
  REQUIRE(c(1.0) == 0.5);
  REQUIRE_THAT(c(3.0), WithinAbs(0.75, 1e-15));   // location + scale
  REQUIRE_THAT(c(-1.0), WithinAbs(0.25, 1e-15));  // location - scale
  REQUIRE_THROWS_AS(calibre::CauchyCdf(0.0, 0.0), calibre::validation_error);
}

TEST_CASE("monotone map interpolates linearly and clamps outside the knots") {
  const calibre::MonotoneMap map({0.0, 2.0, 4.0}, {1.0, 3.0, 3.0});
  REQUIRE(map(1.0) == 2.0);
  REQUIRE(map(3.0) == 3.0);
  REQUIRE(map(-5.0) == 1.0);
  REQUIRE(map(10.0) == 3.0);
  REQUIRE(map(0.0) == 1.0);
  REQUIRE(map(4.0) == 3.0);
  REQUIRE(map.size() == 3);
  REQUIRE(map.interp() == calibre::MonotoneMap::Interp::linear);
}

TEST_CASE("monotone map step interpolation is right-continuous") {
  const calibre::MonotoneMap map({0.0, 2.0, 4.0}, {1.0, 3.0, 5.0},
                                 calibre::MonotoneMap::Interp::step);
  REQUIRE(map(1.0) == 1.0);
  REQUIRE(map(2.0) == 3.0);
  REQUIRE(map(3.999) == 3.0);
  REQUIRE(map(4.0) == 5.0);
}

TEST_CASE("monotone map unit clamps into [0,1]") {
  const calibre::MonotoneMap map({0.0, 1.0}, {-1.0, 2.0});
  REQUIRE(map.unit(0.0) == 0.0);
  REQUIRE(map.unit(1.0) == 1.0);
  REQUIRE_THAT(map.unit(0.5), WithinAbs(0.5, 1e-15));
}

TEST_CASE("monotone map identity maps everything to itself") {
  const calibre::MonotoneMap id = calibre::MonotoneMap::identity();
  for (const double x : {0.0, 0.125, 0.5, 0.99, 1.0}) REQUIRE(id(x) == x);
}

TEST_CASE("monotone map rejects malformed knots") {
  using calibre::MonotoneMap;
  using calibre::validation_error;
  REQUIRE_THROWS_WITH(MonotoneMap({}, {}), "monotone map needs matching nonempty knot vectors");
  REQUIRE_THROWS_WITH(MonotoneMap({0.0}, {0.0, 1.0}),
                      "monotone map needs matching nonempty knot vectors");
  REQUIRE_THROWS_WITH(MonotoneMap({0.0, kNan}, {0.0, 1.0}), "non-finite knot at index 1");
  REQUIRE_THROWS_WITH(MonotoneMap({0.0, 0.0}, {0.0, 1.0}),
                      "knot x not strictly increasing at index 1");
  REQUIRE_THROWS_WITH(MonotoneMap({0.0, 1.0}, {1.0, 0.0}), "knot y decreasing at index 1");
  REQUIRE_THROWS_AS(MonotoneMap({1.0, 0.0}, {0.0, 1.0}), validation_error);
}

TEST_CASE("pairwise sum is exact on integers and independent of chunking") {
  // 1 + 2 + ... + 1000
  const double total =
      calibre::pairwise_sum(1000, [](std::size_t i) { return static_cast<double>(i + 1); });
  REQUIRE(total == 500500.0);
  REQUIRE(calibre::pairwise_sum(0, [](std::size_t) { return 1.0; }) == 0.0);

  std::vector<double> values(777);
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = std::sin(static_cast<double>(i) * 0.7) * 1e3;
  const double via_span = calibre::pairwise_sum(values);
  const double via_term = calibre::pairwise_sum(values.size(), [&](std::size_t i) { return values[i]; });
  REQUIRE(via_span == via_term);
}

TEST_CASE("mean, sample variance and correlation on small exact inputs") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  REQUIRE(calibre::mean(v) == 2.5);
  const std::vector<double> two{1.0, 3.0};
  REQUIRE(calibre::sample_variance(two) == 2.0);

  std::vector<double> a(50), b(50), c(50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = static_cast<double>(i);
    b[i] = 3.0 * a[i] + 7.0;
    c[i] = -2.0 * a[i] + 1.0;
  }
  REQUIRE_THAT(calibre::pearson_correlation(a, b), WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(calibre::pearson_correlation(a, c), WithinAbs(-1.0, 1e-12));
}
