#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "calibre/error.hpp"
#include "calibre/forecast.hpp"
#include "calibre/interval.hpp"
#include "calibre/metrics.hpp"
#include "calibre/monotone_map.hpp"
#include "calibre/scaling.hpp"

namespace calibre {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kCsvHeader = "mu,sigma,y";

// Shortest decimal string that parses back to the same double; the same
// bytes on every run is what makes reports diffable.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline double parse_field(std::string_view field, std::size_t row, const char* name) {
  const std::string_view t = trim(field);
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw validation_error("csv row " + std::to_string(row) + ": bad " + name + " value '" +
                           std::string(field) + "'");
  return value;
}

}  // namespace detail

// CSV schema: exact header line "mu,sigma,y", one record per line. Row
// indices in errors are 0-based over the data rows, matching
// validate_and_load.
inline std::vector<RawRow> parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw validation_error("empty input");
  if (detail::trim(line) != kCsvHeader)
    throw validation_error(std::string("csv header must be '") + kCsvHeader + "'");
  std::vector<RawRow> rows;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const std::string_view body = detail::trim(line);
    if (body.empty()) continue;
    const std::size_t c1 = body.find(',');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : body.find(',', c1 + 1);
    if (c2 == std::string_view::npos || body.find(',', c2 + 1) != std::string_view::npos)
      throw validation_error("csv row " + std::to_string(row) + ": expected 3 fields");
    rows.push_back({detail::parse_field(body.substr(0, c1), row, "mu"),
                    detail::parse_field(body.substr(c1 + 1, c2 - c1 - 1), row, "sigma"),
                    detail::parse_field(body.substr(c2 + 1), row, "y")});
    ++row;
  }
  return rows;
}

// JSON schema: array of {"mu": number, "sigma": number, "y": number}.
inline std::vector<RawRow> parse_json_rows(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error(std::string("json parse error: ") + e.what());
  }
  if (!doc.is_array()) throw validation_error("json input must be an array of records");
  std::vector<RawRow> rows;
  rows.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& rec = doc[i];
    if (!rec.is_object())
      throw validation_error("json row " + std::to_string(i) + ": expected an object");
    RawRow row{};
    const char* names[3] = {"mu", "sigma", "y"};
    for (int f = 0; f < 3; ++f) {
      const auto it = rec.find(names[f]);
      if (it == rec.end() || !it->is_number())
        throw validation_error("json row " + std::to_string(i) + ": missing numeric field '" +
                               names[f] + "'");
      row[static_cast<std::size_t>(f)] = it->get<double>();
    }
    rows.push_back(row);
  }
  return rows;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error("cannot write file: " + path);
  out << content;
  if (!out) throw error("write failed: " + path);
}

// Loads a forecast file, dispatching on the extension: .json means the
// JSON record array, anything else the CSV schema.
inline ForecastSet load_forecast_file(const std::string& path, const std::string& label) {
  std::vector<RawRow> rows;
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    rows = parse_json_rows(read_text_file(path));
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open file: " + path);
    rows = parse_csv(in);
  }
  return validate_and_load(rows, label);
}

inline std::string to_csv(const ForecastSet& set) {
  std::string out{kCsvHeader};
  out.push_back('\n');
  for (const auto& r : set.records) {
    out += format_double(r.mu);
    out.push_back(',');
    out += format_double(r.sigma);
    out.push_back(',');
    out += format_double(r.y);
    out.push_back('\n');
  }
  return out;
}

inline nlohmann::ordered_json report_to_json(const CalibrationReport& report,
                                             const std::string& label) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["label"] = label;
  j["ence"] = report.ence;
  j["cv"] = report.cv;
  j["mean_nll"] = report.mean_nll;
  j["mean_sigma"] = report.mean_sigma;
  auto& bins = j["bins"] = nlohmann::ordered_json::array();
  for (const auto& row : report.diagram.rows) {
    nlohmann::ordered_json b;
    b["j"] = row.bin;
    b["count"] = row.count;
    b["rmv"] = row.rmv;
    b["rmse"] = row.rmse;
    b["sigma_min"] = row.sigma_min;
    b["sigma_max"] = row.sigma_max;
    bins.push_back(std::move(b));
  }
  return j;
}

inline nlohmann::ordered_json calibrator_to_json(const ScalingCalibrator& cal) {
  nlohmann::ordered_json j;
  j["method"] = "std_scaling";
  j["s"] = cal.s;
  j["nll_before"] = cal.nll_before;
  j["nll_after"] = cal.nll_after;
  return j;
}

inline nlohmann::ordered_json map_to_json(const MonotoneMap& map) {
  nlohmann::ordered_json j;
  j["method"] = "interval";
  j["interp"] = map.interp() == MonotoneMap::Interp::step ? "step" : "linear";
  auto& knots = j["knots"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < map.xs().size(); ++i)
    knots.push_back(nlohmann::ordered_json::array({map.xs()[i], map.ys()[i]}));
  return j;
}

inline MonotoneMap map_from_json(const nlohmann::json& j) {
  if (!j.contains("knots") || !j["knots"].is_array())
    throw validation_error("calibrator json: missing knot list");
  std::vector<double> xs, ys;
  for (const auto& k : j["knots"]) {
    if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
      throw validation_error("calibrator json: each knot must be a [x, y] pair");
    xs.push_back(k[0].get<double>());
    ys.push_back(k[1].get<double>());
  }
  const auto interp = j.value("interp", std::string("linear")) == "step"
                          ? MonotoneMap::Interp::step
                          : MonotoneMap::Interp::linear;
  return MonotoneMap(std::move(xs), std::move(ys), interp);
}

inline nlohmann::ordered_json plot_to_json(const IntervalCalibrationPlot& plot) {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["p"] = plot.p;
  j["p_hat"] = plot.p_hat;
  j["max_abs_deviation"] = plot.max_abs_deviation;
  return j;
}

// Canonical on-disk rendering of any report-like JSON value.
inline std::string json_text(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace calibre
