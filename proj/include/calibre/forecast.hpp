#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "calibre/error.hpp"

namespace calibre {

// One forecast: predicted mean and standard deviation of a Gaussian
// predictive distribution, plus the observed target.
struct ForecastRecord {
  double mu = 0.0;
  double sigma = 1.0;
  double y = 0.0;

  bool operator==(const ForecastRecord&) const = default;
};

// Ordered collection of records. All records satisfy the type invariants
// (sigma > 0 and finite, mu and y finite); immutable by convention after
// construction through validate_and_load.
struct ForecastSet {
  std::vector<ForecastRecord> records;
  std::string label;

  std::size_t size() const { return records.size(); }
};

// Raw input row in (mu, sigma, y) order, as in the CSV schema.
using RawRow = std::array<double, 3>;

// Builds a ForecastSet from raw rows, enforcing every invariant.
// Rejects empty input, non-finite fields and sigma <= 0, citing the
// offending row index. Input order is preserved.
inline ForecastSet validate_and_load(const std::vector<RawRow>& rows,
                                     std::string label = {}) {
  if (rows.empty()) throw validation_error("empty input");
  ForecastSet set;
  set.label = std::move(label);
  set.records.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& [mu, sigma, y] = rows[i];
    if (!std::isfinite(mu))
      throw validation_error("non-finite mu at row " + std::to_string(i));
    if (!std::isfinite(sigma))
      throw validation_error("non-finite sigma at row " + std::to_string(i));
    if (!(sigma > 0.0))
      throw validation_error("non-positive sigma at row " + std::to_string(i));
    if (!std::isfinite(y))
      throw validation_error("non-finite y at row " + std::to_string(i));
    set.records.push_back({mu, sigma, y});
  }
  return set;
}

}  // namespace calibre
