#pragma once

// Experiment pipelines behind the isores tool, and their CSV / JSON / SVG
// artifacts. Output assembly is single-threaded and ordered, so reruns of one
// config produce identical payloads.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "isores/config.hpp"

namespace isores {

struct ResultRow {
  std::optional<int> j_min;
  std::optional<int> j_max;
  std::optional<double> theta;
  std::optional<int> n;
  std::optional<double> t;
  std::optional<cplx> sigma;
  std::optional<int> multiplicity;
  std::optional<int> order;
  std::optional<double> displacement;
};

struct PlotSeries {
  std::string name;
  bool hollow = true;  // hollow circles; false draws crosses
  std::vector<cplx> points;
};

struct PlotData {
  std::string x_label = "Re sigma";
  std::string y_label = "Im sigma";
  std::vector<PlotSeries> series;
  std::vector<std::vector<cplx>> rays;  // polylines
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  nlohmann::json summary = nlohmann::json::object();
  std::string assertion;
  bool passed = true;
  std::optional<PlotData> plot;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string csv_header_line(const ExperimentConfig& cfg);
std::string format_csv(const ExperimentConfig& cfg, const ExperimentResult& res);
nlohmann::json format_summary(const ExperimentConfig& cfg, const ExperimentResult& res);
std::string render_svg(const PlotData& plot);

struct RunOptions {
  std::string out_dir = ".";
  bool check = false;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

/// Loads, runs and writes artifacts. Returns the process exit code: 0 success,
/// 1 check failed, 2 configuration error, 3 numerical failure.
int run_config_file(const std::string& path, const RunOptions& opt, std::ostream& log);

}  // namespace isores
