#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "calibre/binning.hpp"
#include "calibre/error.hpp"
#include "calibre/forecast.hpp"
#include "calibre/math.hpp"

namespace calibre {

// Root mean variance over a bin: sqrt of the mean predicted variance.
inline double rmv(std::span<const std::size_t> bin, const ForecastSet& set) {
  if (bin.empty()) throw validation_error("rmv of an empty bin");
  const double ms = pairwise_sum(bin.size(), [&](std::size_t i) {
                      const double s = set.records[bin[i]].sigma;
                      return s * s;
                    }) /
                    static_cast<double>(bin.size());
  return std::sqrt(ms);
}

// Empirical root mean square error over a bin.
inline double rmse(std::span<const std::size_t> bin, const ForecastSet& set) {
  if (bin.empty()) throw validation_error("rmse of an empty bin");
  const double ms = pairwise_sum(bin.size(), [&](std::size_t i) {
                      const auto& r = set.records[bin[i]];
                      const double d = r.y - r.mu;
                      return d * d;
                    }) /
                    static_cast<double>(bin.size());
  return std::sqrt(ms);
}

struct DiagramRow {
  std::size_t bin = 0;  // 1-based bin index
  std::size_t count = 0;
  double rmv = 0.0;
  double rmse = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

// Per-bin RMV/RMSE table backing the reliability diagram. Bins are in
// ascending-sigma order, so rmv is nondecreasing across rows.
struct ReliabilityDiagram {
  std::vector<DiagramRow> rows;
};

inline ReliabilityDiagram reliability_diagram(const ForecastSet& set,
                                              const BinPartition& part) {
  ReliabilityDiagram diagram;
  diagram.rows.reserve(part.bin_count());
  for (std::size_t j = 0; j < part.bin_count(); ++j) {
    const auto& bin = part.bins[j];
    DiagramRow row;
    row.bin = j + 1;
    row.count = bin.size();
    row.rmv = rmv(bin, set);
    row.rmse = rmse(bin, set);
    row.sigma_min = set.records[bin.front()].sigma;
    row.sigma_max = set.records[bin.back()].sigma;
    diagram.rows.push_back(row);
  }
  return diagram;
}

// Expected normalized calibration error: mean over bins of
// |RMV - RMSE| / RMV. Undefined when any bin has RMV = 0.
inline double ence(const ReliabilityDiagram& diagram) {
  if (diagram.rows.empty()) throw validation_error("ence of an empty diagram");
  for (const auto& row : diagram.rows)
    if (!(row.rmv > 0.0))
      throw numerical_error("ence undefined: bin " + std::to_string(row.bin) +
                            " has zero RMV");
  return pairwise_sum(diagram.rows.size(), [&](std::size_t i) {
           const auto& row = diagram.rows[i];
           return std::fabs(row.rmv - row.rmse) / row.rmv;
         }) /
         static_cast<double>(diagram.rows.size());
}

// Coefficient of variation of the predicted STDs: sample std (n-1
// denominator) over the mean. Dispersion diagnostic; exactly invariant
// under uniform scaling of the sigmas.
inline double coefficient_of_variation(const ForecastSet& set) {
  const std::size_t t = set.size();
  if (t < 2) throw validation_error("coefficient of variation needs at least 2 records");
  const double mu_sigma =
      pairwise_sum(t, [&](std::size_t i) { return set.records[i].sigma; }) /
      static_cast<double>(t);
  const double var = pairwise_sum(t, [&](std::size_t i) {
                       const double d = set.records[i].sigma - mu_sigma;
                       return d * d;
                     }) /
                     static_cast<double>(t - 1);
  return std::sqrt(var) / mu_sigma;
}

// Mean Gaussian negative log-likelihood per record (natural log).
inline double mean_nll(const ForecastSet& set) {
  const std::size_t t = set.size();
  if (t == 0) throw validation_error("mean NLL of an empty set");
  return pairwise_sum(t, [&](std::size_t i) {
           const auto& r = set.records[i];
           const double d = r.y - r.mu;
           return 0.5 * std::log(2.0 * kPi * r.sigma * r.sigma) +
                  d * d / (2.0 * r.sigma * r.sigma);
         }) /
         static_cast<double>(t);
}

// Default bin count: at most 15 bins, at least 50 records per bin,
// floor of one bin.
inline std::size_t default_bin_count(std::size_t t) {
  return std::max<std::size_t>(1, std::min<std::size_t>(15, t / 50));
}

struct CalibrationReport {
  double ence = 0.0;
  double cv = 0.0;
  double mean_nll = 0.0;
  double mean_sigma = 0.0;
  ReliabilityDiagram diagram;
};

// Full diagnostic summary. n_bins = 0 selects the default rule.
// Deterministic for a fixed input regardless of thread configuration.
inline CalibrationReport evaluate(const ForecastSet& set, std::size_t n_bins = 0) {
  if (n_bins == 0) n_bins = default_bin_count(set.size());
  const BinPartition part = bin_by_sigma(set, n_bins);
  CalibrationReport report;
  report.diagram = reliability_diagram(set, part);
  report.ence = ence(report.diagram);
  report.cv = coefficient_of_variation(set);
  report.mean_nll = mean_nll(set);
  report.mean_sigma =
      pairwise_sum(set.size(), [&](std::size_t i) { return set.records[i].sigma; }) /
      static_cast<double>(set.size());
  return report;
}

}  // namespace calibre
