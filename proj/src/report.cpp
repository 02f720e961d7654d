#include "gibbslab/report.hpp"

#include <cstdio>
#include <sstream>

namespace gibbslab {

using nlohmann::json;

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> columns = {"theorem", "point",  "gamma",     "lambda", "m",      "radius",
                                                   "p",       "bound_raw", "bound", "oracle", "oracle_se", "margin",
                                                   "pass",    "asserted", "seed",  "terms"};
  return columns;
}

std::string format_number(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

namespace {

constexpr int kCsvDigits = 12;

std::string cell(const std::optional<double>& v) { return v ? format_number(*v, kCsvDigits) : std::string(); }

std::string joined_terms(const ReportRow& row) {
  std::string out;
  for (const auto& [name, value] : row.terms) {
    if (!out.empty()) out += ';';
    out += name + "=" + format_number(value, kCsvDigits);
  }
  return out;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : rows) {
    out << r.theorem << ',' << r.point << ',' << format_number(r.gamma, kCsvDigits) << ','
        << format_number(r.lambda, kCsvDigits) << ',' << format_number(r.m, kCsvDigits) << ','
        << format_number(r.radius, kCsvDigits) << ',' << cell(r.p) << ',' << format_number(r.bound_raw, kCsvDigits)
        << ',' << format_number(r.bound, kCsvDigits) << ',' << cell(r.oracle) << ',' << cell(r.oracle_se) << ','
        << cell(r.margin) << ',' << (r.pass ? "true" : "false") << ',' << (r.asserted ? "true" : "false") << ','
        << r.seed << ',' << joined_terms(r) << '\n';
  }
  return out.str();
}

json to_json(const std::vector<ReportRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json terms = json::object();
    for (const auto& [name, value] : r.terms) terms[name] = value;
    out.push_back({{"theorem", r.theorem},
                   {"point", r.point},
                   {"config", {{"gamma", r.gamma}, {"lambda", r.lambda}, {"m", r.m}, {"radius", r.radius},
                               {"p", optional_number(r.p)}}},
                   {"bound", {{"raw", r.bound_raw}, {"clamped", r.bound}, {"terms", terms}}},
                   {"oracle", {{"value", optional_number(r.oracle)}, {"se", optional_number(r.oracle_se)}}},
                   {"margin", optional_number(r.margin)},
                   {"pass", r.pass},
                   {"asserted", r.asserted},
                   {"seed", r.seed},
                   {"runtime_seconds", r.runtime_seconds}});
  }
  return out;
}

std::string series_csv(const std::vector<ReportRow>& rows, const std::string& theorem, const std::string& axis) {
  std::ostringstream out;
  out << "point,x,bound,oracle\n";
  for (const auto& r : rows) {
    if (r.theorem != theorem) continue;
    double x = r.gamma;
    if (axis == "lambda") x = r.lambda;
    else if (axis == "m") x = r.m;
    else if (axis == "radius") x = r.radius;
    out << r.point << ',' << format_number(x, kCsvDigits) << ',' << format_number(r.bound, kCsvDigits) << ','
        << cell(r.oracle) << '\n';
  }
  return out.str();
}

}  // namespace gibbslab
