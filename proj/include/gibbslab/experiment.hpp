#pragma once

#include "gibbslab/config.hpp"
#include "gibbslab/data_model.hpp"
#include "gibbslab/report.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gibbslab {

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputEnv = "GIBBSLAB_OUT";

LandscapePtr build_landscape(const LandscapeSpec& spec);
DataModelPtr build_data_model(const ExperimentConfig& config);

/// Rows for every (theorem, point), ordered by point index, theorem order, then minimum.
/// Oracles run only for d <= 3. ConfigError when a radius exceeds r0.
std::vector<ReportRow> evaluate(const ExperimentConfig& config);

struct RunOutcome {
  std::vector<ReportRow> rows;
  std::filesystem::path directory;
  /// 0 when every asserted row passes, 1 otherwise.
  int exit_code = 0;
};

/// Evaluates and writes report.csv, report.json and series_<theorem>.csv into a fresh
/// run-NNNN directory under `out`, config.output_dir, $GIBBSLAB_OUT or ./gibbslab-out.
RunOutcome run_experiment(const ExperimentConfig& config, const std::optional<std::string>& out = std::nullopt);

/// First sweep axis with more than one value, else "gamma".
std::string series_axis(const GibbsSweep& sweep);

}  // namespace gibbslab
