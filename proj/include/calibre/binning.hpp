#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "calibre/error.hpp"
#include "calibre/forecast.hpp"

namespace calibre {

// Equal-count partition of record indices, ordered by ascending sigma.
// Bins are disjoint, cover all indices, and their sigma intervals have
// nondecreasing, non-overlapping boundaries.
struct BinPartition {
  std::vector<std::vector<std::size_t>> bins;

  std::size_t bin_count() const { return bins.size(); }
};

// Sorts indices by (sigma, original index) and slices them into n_bins
// contiguous blocks. When n_bins does not divide T, the first
// (T mod n_bins) bins take one extra element, so sizes differ by at most 1.
inline BinPartition bin_by_sigma(const ForecastSet& set, std::size_t n_bins) {
  const std::size_t t = set.size();
  if (n_bins == 0) throw validation_error("bin count must be positive");
  if (n_bins > t)
    throw validation_error("bin count " + std::to_string(n_bins) +
                           " exceeds record count " + std::to_string(t));

  std::vector<std::size_t> order(t);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (set.records[a].sigma != set.records[b].sigma)
      return set.records[a].sigma < set.records[b].sigma;
    return a < b;
  });

  BinPartition part;
  part.bins.resize(n_bins);
  const std::size_t base = t / n_bins;
  const std::size_t extra = t % n_bins;
  std::size_t pos = 0;
  for (std::size_t j = 0; j < n_bins; ++j) {
    const std::size_t len = base + (j < extra ? 1 : 0);
    part.bins[j].assign(order.begin() + pos, order.begin() + pos + len);
    pos += len;
  }
  return part;
}

}  // namespace calibre
