#include "gibbslab/config.hpp"
#include "gibbslab/errors.hpp"
#include "gibbslab/experiment.hpp"
#include "gibbslab/report.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace gibbslab;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({
  // one quadratic point
  "name": "smoke",
  "master_seed": 7,
  "landscape": {"kind": "quadratic", "dimension": 1, "box": [-5, 5]},
  "gibbs": {"gamma": 10}
})";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gibbslab-unit-" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::string> issues_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
  for (const auto& i : issues) {
    if (i.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("minimal config gets defaults") {
  const ExperimentConfig c = parse_config(kMinimal);
  CHECK(c.master_seed == 7);
  CHECK(c.gibbs.gamma == std::vector<double>{10.0});
  CHECK(c.gibbs.lambda == std::vector<double>{0.0});
  CHECK(c.gibbs.variant == GenBoundVariant::hoeffding_stated);
  CHECK(c.theorems == std::vector<std::string>{"local_excess"});
  CHECK(c.landscape.curvature == std::vector<std::vector<double>>{{1.0}});
}

TEST_CASE("config round trip is the identity") {
  const char* full = R"({
    "name": "full", "master_seed": 18446744073709551615, "workers": 2, "output_dir": "out",
    "landscape": {"kind": "spline_double_well", "box": [-3, 3], "curvature_left": 6, "junction_right": 0.4},
    "data_model": {"kind": "multiplicative", "amplitude": 0.25},
    "gibbs": {"gamma": [10, 100], "lambda": [0, 0.1], "m": [100, 1000],
              "radius": {"mode": "tuned", "values": [0.2, 0.3333333333333333]}, "sigma": 1.5, "variant": "theorem"},
    "sampler": {"kind": "metropolis", "eta": 0.3, "steps": 500, "burn_in": 50},
    "oracle": {"nodes_per_sd": 24, "datasets": 3, "trials": 60},
    "theorems": ["complement", "minima_distribution"]
  })";
  for (const char* text : {kMinimal, full}) {
    const nlohmann::json once = to_json(parse_config(text));
    const nlohmann::json twice = to_json(parse_config(once.dump()));
    CHECK(once == twice);
    CHECK(once.dump() == twice.dump());
  }
  const ExperimentConfig c = parse_config(full);
  CHECK(c.master_seed == 18446744073709551615ULL);
  CHECK(c.landscape.shape.curvature_left == 6.0);
  CHECK(c.gibbs.radius_mode == RadiusMode::tuned);
}

TEST_CASE("config errors list every violated field") {
  const auto issues = issues_of(R"({
    "landscape": {"kind": "quadratic", "dimenson": 2},
    "gibbs": {"gamma": [], "m": [0.5], "lambda": -1},
    "sampler": {"kind": "hmc"},
    "oracle": {"trials": 10},
    "theorems": ["nope"],
    "extra": 1
  })");
  CHECK(mentions(issues, "master_seed"));
  CHECK(mentions(issues, "landscape.dimenson: unknown key"));
  CHECK(mentions(issues, "gibbs.gamma"));
  CHECK(mentions(issues, "gibbs.m"));
  CHECK(mentions(issues, "gibbs.lambda"));
  CHECK(mentions(issues, "sampler.kind"));
  CHECK(mentions(issues, "oracle.trials"));
  CHECK(mentions(issues, "theorems"));
  CHECK(mentions(issues, "config.extra: unknown key"));
}

TEST_CASE("config rejects parameters of another kind and mismatched models") {
  CHECK(mentions(issues_of(R"({"master_seed": 1, "gibbs": {"gamma": 1},
      "landscape": {"kind": "double_well", "curvature_left": 3}})"), "curvature_left"));
  CHECK(mentions(issues_of(R"({"master_seed": 1, "gibbs": {"gamma": 1},
      "landscape": {"kind": "double_well"}, "data_model": {"kind": "rls"}})"), "landscape.kind"));
  CHECK(mentions(issues_of("{not json"), "not valid JSON"));
}

TEST_CASE("minimal run: one passing row and the report files") {
  const fs::path root = scratch("minimal");
  const RunOutcome out = run_experiment(parse_config(kMinimal), root.string());
  REQUIRE(out.rows.size() == 1);
  CHECK(out.rows[0].asserted);
  CHECK(out.rows[0].pass);
  CHECK(*out.rows[0].margin > 0.0);
  CHECK(out.exit_code == 0);
  CHECK(out.directory == root / "run-0001");
  for (const char* f : {"report.csv", "report.json", "series_local_excess.csv"}) CHECK(fs::exists(out.directory / f));

  const std::string csv = slurp(out.directory / "report.csv");
  std::string header;
  for (const auto& c : csv_columns()) header += (header.empty() ? "" : ",") + c;
  CHECK(csv.substr(0, csv.find('\n')) == header);

  const nlohmann::json j = nlohmann::json::parse(slurp(out.directory / "report.json"));
  CHECK(j.at("rows").size() == 1);
  CHECK(j.at("rows")[0].at("bound").at("clamped").get<double>() == out.rows[0].bound);
  CHECK(j.at("config").at("master_seed") == 7);
  fs::remove_all(root);
}

TEST_CASE("runs never touch earlier run directories") {
  const fs::path root = scratch("append");
  const ExperimentConfig c = parse_config(kMinimal);
  const RunOutcome first = run_experiment(c, root.string());
  const auto stamp = fs::last_write_time(first.directory / "report.csv");
  const std::string before = slurp(first.directory / "report.csv");
  const RunOutcome second = run_experiment(c, root.string());
  CHECK(second.directory == root / "run-0002");
  CHECK(fs::last_write_time(first.directory / "report.csv") == stamp);
  CHECK(slurp(first.directory / "report.csv") == before);
  CHECK(slurp(second.directory / "report.csv") == before);
  fs::remove_all(root);
}

TEST_CASE("a radius beyond r0 is a configuration error") {
  ExperimentConfig c = parse_config(kMinimal);
  c.gibbs.radius_mode = RadiusMode::absolute;
  c.gibbs.radius = {6.0};
  CHECK_THROWS_AS(evaluate(c), ConfigError);
}

TEST_CASE("rows are keyed uniquely and ordered by point") {
  ExperimentConfig c = parse_config(kMinimal);
  c.landscape.kind = "double_well";
  c.landscape.box_low = -2.5;
  c.landscape.box_high = 2.5;
  c.gibbs.gamma = {10.0, 40.0};
  c.gibbs.radius = {0.3, 0.6};
  c.theorems = {"complement", "local_excess", "minima_distribution"};
  c.workers = 3;
  const auto rows = evaluate(c);
  CHECK(rows.size() == 4 * (1 + 2 + 2));
  std::set<std::pair<std::string, std::string>> keys;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(keys.insert({rows[i].theorem, rows[i].point}).second);
    if (i > 0) CHECK(rows[i - 1].point_index <= rows[i].point_index);
  }
  // theorem order within a point follows the canonical list, not the config order
  CHECK(rows[0].theorem == "local_excess");
  CHECK(series_axis(c.gibbs) == "gamma");
}

TEST_CASE("tuned radii shrink the complement mass along a gamma sweep") {
  ExperimentConfig c = parse_config(kMinimal);
  c.landscape.kind = "double_well";
  c.landscape.box_low = -2.5;
  c.landscape.box_high = 2.5;
  c.gibbs.gamma = {10.0, 100.0, 1000.0, 10000.0};
  c.gibbs.radius_mode = RadiusMode::tuned;
  c.gibbs.radius = {1.0 / 3.0};
  c.theorems = {"complement"};
  const auto rows = evaluate(c);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(*rows[i].oracle < *rows[i - 1].oracle);
}

TEST_CASE("same seed, same bytes") {
  ExperimentConfig c = parse_config(kMinimal);
  c.landscape.kind = "double_well";
  c.landscape.box_low = -2.5;
  c.landscape.box_high = 2.5;
  c.data_model.amplitude = 0.3;
  c.gibbs.m = {30.0};
  c.sampler.steps = 300;
  c.theorems = {"generalization", "local_excess"};
  CHECK(to_csv(evaluate(c)) == to_csv(evaluate(c)));
  ExperimentConfig other = c;
  other.master_seed = 8;
  CHECK(to_csv(evaluate(c)) != to_csv(evaluate(other)));
}

TEST_CASE("CSV formatting") {
  ReportRow r;
  r.theorem = "complement";
  r.point = "p0000";
  r.gamma = 1.0 / 3.0;
  r.terms = {{"a", 0.1}, {"b", 2.0}};
  const std::string csv = to_csv({r});
  CHECK(csv.find("0.333333333333") != std::string::npos);
  CHECK(csv.find("a=0.1;b=2") != std::string::npos);
  CHECK(csv.find(",,") != std::string::npos);  // absent p, oracle, se, margin
  CHECK(series_csv({r}, "complement", "gamma").find("p0000,0.333333333333,0,") != std::string::npos);
}
