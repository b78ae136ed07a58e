#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "calibre/calibre.hpp"

namespace {

namespace fs = std::filesystem;
using namespace calibre;

// Flag combinations the parser cannot rule out on its own; maps to the
// usage exit code.
struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string recal_path;
  std::string val_path;
  long long n_bins = -1;  // -1 selects the automatic rule
  std::string method;
  std::uint64_t seed = 0;
  double split = 0.0;
  bool split_given = false;
  bool svg = false;
  std::string out_dir = ".";
  bool allow_same_set = false;
  std::string scenario;
  std::size_t t = 50000;
  double factor = 2.0;
};

std::size_t resolved_bins(const Options& o) {
  return o.n_bins < 0 ? 0 : static_cast<std::size_t>(o.n_bins);
}

std::string out_path(const Options& o, const std::string& name) {
  return (fs::path(o.out_dir) / name).string();
}

void emit(const Options& o, const std::string& name, const std::string& content) {
  write_text_file(out_path(o, name), content);
  std::cout << "wrote " << out_path(o, name) << "\n";
}

void warn_near_zero_rmv(const CalibrationReport& rep, const std::string& label) {
  for (const auto& row : rep.diagram.rows)
    if (row.rmv < 1e-9 * std::max(rep.mean_sigma, 1e-300))
      std::cerr << "warning: " << label << ": bin " << row.bin
                << " has near-zero RMV; ENCE is unstable there\n";
}

void warn_skips(const std::vector<std::size_t>& skipped, const std::string& label) {
  if (skipped.empty()) return;
  std::cerr << "warning: " << label << ": moment integral did not converge for "
            << skipped.size() << " record(s); skipped rows:";
  for (std::size_t i = 0; i < skipped.size() && i < 10; ++i) std::cerr << ' ' << skipped[i];
  if (skipped.size() > 10) std::cerr << " ...";
  std::cerr << '\n';
}

CalibrationReport report_and_write(const Options& o, const ForecastSet& set,
                                   const std::string& name) {
  CalibrationReport rep = evaluate(set, resolved_bins(o));
  warn_near_zero_rmv(rep, name);
  emit(o, name + ".json", json_text(report_to_json(rep, name)));
  return rep;
}

// Three ways to obtain disjoint fitting/evaluation sets: two explicit
// files, a seeded split of one file, or (explicitly acknowledged) the same
// set twice.
SplitResult resolve_sets(const Options& o) {
  if (!o.recal_path.empty() || !o.val_path.empty()) {
    if (o.recal_path.empty() || o.val_path.empty())
      throw usage_error("--recal and --val must be given together");
    if (!o.input.empty()) throw usage_error("--input conflicts with --recal/--val");
    if (o.split_given) throw usage_error("--split conflicts with --recal/--val");
    return {load_forecast_file(o.recal_path, "recalibration"),
            load_forecast_file(o.val_path, "validation")};
  }
  if (o.input.empty()) throw usage_error("give either --input or --recal and --val");
  ForecastSet whole = load_forecast_file(o.input, "input");
  if (o.split_given) {
    if (!(o.split > 0.0 && o.split < 1.0)) throw usage_error("--split must be inside (0, 1)");
    const auto count = static_cast<std::size_t>(
        std::llround(o.split * static_cast<double>(whole.size())));
    return split_forecast_set(whole, count, o.seed);
  }
  if (!o.allow_same_set)
    throw usage_error(
        "fitting and evaluation sets must be disjoint: give --recal/--val, or --split, "
        "or pass --allow-same-set");
  SplitResult both;
  both.recal = whole;
  both.recal.label = "recalibration";
  both.val = std::move(whole);
  both.val.label = "validation";
  return both;
}

int run_evaluate(const Options& o) {
  const ForecastSet set = load_forecast_file(o.input, "input");
  fs::create_directories(o.out_dir);
  const CalibrationReport rep = report_and_write(o, set, "report");
  if (o.svg) emit(o, "reliability.svg", svg::reliability_diagram_svg(rep, "input"));
  return 0;
}

int run_calibrate(const Options& o) {
  SplitResult sets = resolve_sets(o);
  fs::create_directories(o.out_dir);
  const CalibrationReport val_before = report_and_write(o, sets.val, "val_before");
  report_and_write(o, sets.recal, "recal_before");

  if (o.method == "std_scaling") {
    const ScalingCalibrator cal = fit_std_scaling(sets.recal);
    emit(o, "calibrator.json", json_text(calibrator_to_json(cal)));
    report_and_write(o, apply_scaling(cal, sets.recal), "recal_after");
    const ForecastSet val_after_set = apply_scaling(cal, sets.val);
    const CalibrationReport val_after = report_and_write(o, val_after_set, "val_after");
    if (o.svg) {
      emit(o, "reliability_before.svg", svg::reliability_diagram_svg(val_before, "validation"));
      emit(o, "reliability_after.svg",
           svg::reliability_diagram_svg(val_after, "validation, scaled"));
    }
    return 0;
  }

  const MonotoneMap map = recalibrate_interval(sets.recal);
  emit(o, "calibrator.json", json_text(map_to_json(map)));
  const IntervalCalibrationPlot plot_before =
      calibration_plot(MonotoneMap::identity(), sets.val);
  const IntervalCalibrationPlot plot_after = calibration_plot(map, sets.val);
  emit(o, "plot_before.json", json_text(plot_to_json(plot_before)));
  emit(o, "plot_after.json", json_text(plot_to_json(plot_after)));

  const MomentExtractionResult recal_after = extract_recalibrated_moments(sets.recal, map);
  warn_skips(recal_after.skipped, "recalibration set");
  report_and_write(o, recal_after.set, "recal_after");
  const MomentExtractionResult val_after = extract_recalibrated_moments(sets.val, map);
  warn_skips(val_after.skipped, "validation set");
  const CalibrationReport val_after_rep = report_and_write(o, val_after.set, "val_after");
  if (o.svg) {
    emit(o, "interval_before.svg", svg::interval_plot_svg(plot_before, "validation"));
    emit(o, "interval_after.svg", svg::interval_plot_svg(plot_after, "validation, recalibrated"));
    emit(o, "reliability_before.svg", svg::reliability_diagram_svg(val_before, "validation"));
    emit(o, "reliability_after.svg",
         svg::reliability_diagram_svg(val_after_rep, "validation, recalibrated"));
  }
  return 0;
}

int run_simulate(const Options& o) {
  SyntheticScenario sc;
  if (o.scenario == "oracle") {
    sc = SyntheticScenario::oracle(o.t, o.seed);
  } else if (o.scenario == "random") {
    sc = SyntheticScenario::random(o.t, o.seed);
  } else {
    sc = SyntheticScenario::overconfident(o.t, o.seed, o.factor);
  }
  const ForecastSet set = generate_synthetic(sc);
  fs::create_directories(o.out_dir);
  emit(o, std::string(scenario_name(sc.kind)) + ".csv", to_csv(set));
  return 0;
}

int run_compare(const Options& o) {
  SplitResult sets = resolve_sets(o);
  fs::create_directories(o.out_dir);
  const std::size_t bins = resolved_bins(o);

  const CalibrationReport before = evaluate(sets.val, bins);
  const IntervalCalibrationPlot before_plot =
      calibration_plot(MonotoneMap::identity(), sets.val);

  const ScalingCalibrator cal = fit_std_scaling(sets.recal);
  const ForecastSet scaled_val = apply_scaling(cal, sets.val);
  const CalibrationReport scaled = evaluate(scaled_val, bins);
  const IntervalCalibrationPlot scaled_plot =
      calibration_plot(MonotoneMap::identity(), scaled_val);

  const MonotoneMap map = recalibrate_interval(sets.recal);
  const MomentExtractionResult extracted = extract_recalibrated_moments(sets.val, map);
  warn_skips(extracted.skipped, "validation set");
  const CalibrationReport interval_rep = evaluate(extracted.set, bins);
  const IntervalCalibrationPlot interval_plot = calibration_plot(map, sets.val);

  auto column = [](const char* name, const CalibrationReport& rep,
                   const IntervalCalibrationPlot& plot) {
    nlohmann::ordered_json c;
    c["name"] = name;
    c["ence"] = rep.ence;
    c["cv"] = rep.cv;
    c["mean_nll"] = rep.mean_nll;
    c["interval_plot_max_abs_deviation"] = plot.max_abs_deviation;
    return c;
  };
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["split"] = {{"recal_count", sets.recal.size()}, {"val_count", sets.val.size()}};
  auto& cols = j["columns"] = nlohmann::ordered_json::array();
  cols.push_back(column("before", before, before_plot));
  cols.push_back(column("std_scaling", scaled, scaled_plot));
  auto interval_col = column("interval", interval_rep, interval_plot);
  interval_col["skipped_records"] = extracted.skipped.size();
  cols.push_back(interval_col);
  j["scaling_factor"] = cal.s;
  emit(o, "compare.json", json_text(j));

  if (o.svg) {
    emit(o, "compare_reliability_before.svg",
         svg::reliability_diagram_svg(before, "validation"));
    emit(o, "compare_reliability_scaling.svg",
         svg::reliability_diagram_svg(scaled, "validation, scaled"));
    emit(o, "compare_reliability_interval.svg",
         svg::reliability_diagram_svg(interval_rep, "validation, recalibrated"));
    emit(o, "compare_interval_plot.svg",
         svg::interval_plot_svg(interval_plot, "validation, recalibrated"));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"evaluation and recalibration of regression uncertainty estimates"};
  app.require_subcommand(1);

  CLI::App* cmd_evaluate =
      app.add_subcommand("evaluate", "binned calibration report for one forecast file");
  cmd_evaluate->add_option("--input", o.input, "forecast file (csv or json)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_evaluate->add_option("--n-bins", o.n_bins, "number of equal-count bins")
      ->check(CLI::PositiveNumber);
  cmd_evaluate->add_flag("--svg", o.svg, "also render diagrams");
  cmd_evaluate->add_option("--out-dir", o.out_dir, "output directory");

  CLI::App* cmd_calibrate =
      app.add_subcommand("calibrate", "fit a recalibration method and report before/after");
  cmd_calibrate->add_option("--input", o.input, "single forecast file to split")
      ->check(CLI::ExistingFile);
  cmd_calibrate->add_option("--recal", o.recal_path, "recalibration forecast file")
      ->check(CLI::ExistingFile);
  cmd_calibrate->add_option("--val", o.val_path, "validation forecast file")
      ->check(CLI::ExistingFile);
  cmd_calibrate->add_option("--method", o.method, "recalibration method")
      ->required()
      ->check(CLI::IsMember({"std_scaling", "interval"}));
  cmd_calibrate->add_option("--n-bins", o.n_bins, "number of equal-count bins")
      ->check(CLI::PositiveNumber);
  cmd_calibrate->add_option("--seed", o.seed, "seed for the --split shuffle");
  cmd_calibrate->add_option("--split", o.split, "recalibration fraction of --input");
  cmd_calibrate->add_flag("--svg", o.svg, "also render diagrams");
  cmd_calibrate->add_option("--out-dir", o.out_dir, "output directory");
  cmd_calibrate->add_flag("--allow-same-set", o.allow_same_set,
                          "fit and evaluate on the same records");

  CLI::App* cmd_simulate =
      app.add_subcommand("simulate", "generate a synthetic forecast set as csv");
  cmd_simulate->add_option("--scenario", o.scenario, "oracle | random | overconfident")
      ->required()
      ->check(CLI::IsMember({"oracle", "random", "overconfident"}));
  cmd_simulate->add_option("--t", o.t, "number of records")->check(CLI::PositiveNumber);
  cmd_simulate->add_option("--seed", o.seed, "generator seed");
  cmd_simulate->add_option("--factor", o.factor, "overconfidence factor")
      ->check(CLI::PositiveNumber);
  cmd_simulate->add_option("--out-dir", o.out_dir, "output directory");

  CLI::App* cmd_compare =
      app.add_subcommand("compare", "both recalibration methods side by side");
  cmd_compare->add_option("--input", o.input, "single forecast file to split")
      ->check(CLI::ExistingFile);
  cmd_compare->add_option("--recal", o.recal_path, "recalibration forecast file")
      ->check(CLI::ExistingFile);
  cmd_compare->add_option("--val", o.val_path, "validation forecast file")
      ->check(CLI::ExistingFile);
  cmd_compare->add_option("--n-bins", o.n_bins, "number of equal-count bins")
      ->check(CLI::PositiveNumber);
  cmd_compare->add_option("--seed", o.seed, "seed for the --split shuffle");
  cmd_compare->add_option("--split", o.split, "recalibration fraction of --input");
  cmd_compare->add_flag("--svg", o.svg, "also render diagrams");
  cmd_compare->add_option("--out-dir", o.out_dir, "output directory");
  cmd_compare->add_flag("--allow-same-set", o.allow_same_set,
                        "fit and evaluate on the same records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  o.split_given = cmd_calibrate->count("--split") > 0 || cmd_compare->count("--split") > 0;

  try {
    if (app.got_subcommand(cmd_evaluate)) return run_evaluate(o);
    if (app.got_subcommand(cmd_calibrate)) return run_calibrate(o);
    if (app.got_subcommand(cmd_simulate)) return run_simulate(o);
    return run_compare(o);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
