#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gibbslab {

/// One (theorem, configuration point) row of a run report.
struct ReportRow {
  std::string theorem;
  std::string point;  ///< unique within a theorem
  std::size_t point_index = 0;
  double gamma = 0.0;
  double lambda = 0.0;
  double m = 0.0;
  double radius = 0.0;
  std::optional<double> p;
  double bound_raw = 0.0;
  double bound = 0.0;
  std::optional<double> oracle;
  std::optional<double> oracle_se;
  /// Slack of the asserted inequality; negative means the oracle violates the bound.
  std::optional<double> margin;
  bool pass = true;
  /// False when the row is informational (no oracle, or the bound is vacuous).
  bool asserted = false;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> terms;
  double runtime_seconds = 0.0;
};

/// Fixed CSV header, in column order.
const std::vector<std::string>& csv_columns();

/// printf %.{digits}g
std::string format_number(double v, int digits);

std::string to_csv(const std::vector<ReportRow>& rows);
nlohmann::json to_json(const std::vector<ReportRow>& rows);

/// series_<theorem>.csv contents: point, x, bound, oracle for one theorem.
std::string series_csv(const std::vector<ReportRow>& rows, const std::string& theorem, const std::string& axis);

}  // namespace gibbslab
