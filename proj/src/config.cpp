#include "gibbslab/config.hpp"

#include "gibbslab/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gibbslab {

using nlohmann::json;

std::string to_string(RadiusMode mode) {
  switch (mode) {
    case RadiusMode::tuned: return "tuned";
    case RadiusMode::fraction_of_r0: return "fraction_of_r0";
    case RadiusMode::absolute: return "absolute";
  }
  return "unknown";
}

const std::vector<std::string>& theorem_names() {
  static const std::vector<std::string> names = {"local_excess",  "generalization", "minima_distribution",
                                                 "ellipsoid_mass", "complement",     "global_excess",
                                                 "pseudo_excess"};
  return names;
}

namespace {

// Collects every problem instead of stopping at the first.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& issues) : issues_(issues) {}

  void issue(const std::string& path, const std::string& what) { issues_.push_back(path + ": " + what); }

  bool object(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) {
      issue(path, "must be an object");
      return false;
    }
    for (const auto& item : j.items()) {
      if (!allowed.count(item.key())) issue(path + "." + item.key(), "unknown key");
    }
    return true;
  }

  bool number(const json& obj, const std::string& key, const std::string& path, double& out) {
    if (!obj.contains(key) || obj.at(key).is_null()) return false;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      issue(path + "." + key, "must be a number");
      return false;
    }
    out = v.get<double>();
    if (!std::isfinite(out)) {
      issue(path + "." + key, "must be finite");
      return false;
    }
    return true;
  }

  bool optional_number(const json& obj, const std::string& key, const std::string& path, std::optional<double>& out) {
    double v = 0.0;
    if (!number(obj, key, path, v)) return false;
    out = v;
    return true;
  }

  bool count(const json& obj, const std::string& key, const std::string& path, std::size_t& out) {
    if (!obj.contains(key) || obj.at(key).is_null()) return false;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      issue(path + "." + key, "must be a nonnegative integer");
      return false;
    }
    out = v.get<std::size_t>();
    return true;
  }

  bool text(const json& obj, const std::string& key, const std::string& path, std::string& out) {
    if (!obj.contains(key) || obj.at(key).is_null()) return false;
    if (!obj.at(key).is_string()) {
      issue(path + "." + key, "must be a string");
      return false;
    }
    out = obj.at(key).get<std::string>();
    return true;
  }

  /// Accepts a scalar or a nonempty list of numbers.
  bool numbers(const json& obj, const std::string& key, const std::string& path, std::vector<double>& out) {
    if (!obj.contains(key) || obj.at(key).is_null()) return false;
    const json& v = obj.at(key);
    std::vector<double> values;
    if (v.is_number()) {
      values.push_back(v.get<double>());
    } else if (v.is_array()) {
      for (const auto& x : v) {
        if (!x.is_number()) {
          issue(path + "." + key, "must contain only numbers");
          return false;
        }
        values.push_back(x.get<double>());
      }
    } else {
      issue(path + "." + key, "must be a number or a list of numbers");
      return false;
    }
    if (values.empty()) {
      issue(path + "." + key, "must not be empty");
      return false;
    }
    for (double x : values) {
      if (!std::isfinite(x)) {
        issue(path + "." + key, "must contain finite numbers");
        return false;
      }
    }
    out = std::move(values);
    return true;
  }

 private:
  std::vector<std::string>& issues_;
};

void read_landscape(Reader& rd, const json& j, LandscapeSpec& s) {
  const std::string path = "landscape";
  if (!rd.object(j, path,
                 {"kind", "dimension", "box", "curvature", "center", "offset", "curvature_left", "curvature_right",
                  "center_left", "center_right", "junction_left", "junction_right"})) {
    return;
  }
  rd.text(j, "kind", path, s.kind);
  const std::set<std::string> kinds = {"quadratic", "double_well", "spline_double_well", "location", "rls"};
  if (!kinds.count(s.kind)) rd.issue(path + ".kind", "unknown landscape '" + s.kind + "'");
  rd.count(j, "dimension", path, s.dimension);
  if (s.dimension == 0) rd.issue(path + ".dimension", "must be at least 1");
  if (s.dimension > 16) rd.issue(path + ".dimension", "must be at most 16");
  std::vector<double> box;
  if (rd.numbers(j, "box", path, box)) {
    if (box.size() != 2) {
      rd.issue(path + ".box", "must be [low, high]");
    } else {
      s.box_low = box[0];
      s.box_high = box[1];
    }
  }
  if (!(s.box_low < s.box_high)) rd.issue(path + ".box", "low must be below high");

  auto reject = [&](std::initializer_list<const char*> keys) {
    for (const char* k : keys) {
      if (j.contains(k)) rd.issue(path + "." + k, "not a parameter of landscape '" + s.kind + "'");
    }
  };
  if (s.kind == "quadratic") {
    reject({"curvature_left", "curvature_right", "center_left", "center_right", "junction_left", "junction_right"});
    const std::size_t d = s.dimension;
    s.curvature.assign(d, std::vector<double>(d, 0.0));
    for (std::size_t k = 0; k < d; ++k) s.curvature[k][k] = 1.0;
    s.center.assign(d, 0.0);
    if (j.contains("curvature")) {
      const json& c = j.at("curvature");
      bool ok = c.is_array() && c.size() == d;
      if (ok) {
        for (std::size_t r = 0; r < d && ok; ++r) {
          ok = c[r].is_array() && c[r].size() == d;
          for (std::size_t k = 0; ok && k < d; ++k) {
            ok = c[r][k].is_number();
            if (ok) s.curvature[r][k] = c[r][k].get<double>();
          }
        }
      }
      if (!ok) rd.issue(path + ".curvature", "must be a d x d matrix of numbers");
    }
    std::vector<double> center;
    if (rd.numbers(j, "center", path, center)) {
      if (center.size() != d) rd.issue(path + ".center", "must have d entries");
      else s.center = center;
    }
    rd.number(j, "offset", path, s.offset);
    if (s.offset < 0.0) rd.issue(path + ".offset", "must be nonnegative");
  } else if (s.kind == "spline_double_well") {
    reject({"curvature", "center", "offset"});
    if (s.dimension != 1) rd.issue(path + ".dimension", "spline_double_well is one-dimensional");
    rd.number(j, "curvature_left", path, s.shape.curvature_left);
    rd.number(j, "curvature_right", path, s.shape.curvature_right);
    rd.number(j, "center_left", path, s.shape.center_left);
    rd.number(j, "center_right", path, s.shape.center_right);
    rd.number(j, "junction_left", path, s.shape.junction_left);
    rd.number(j, "junction_right", path, s.shape.junction_right);
  } else {
    reject({"curvature", "center", "offset", "curvature_left", "curvature_right", "center_left", "center_right",
            "junction_left", "junction_right"});
  }
}

void read_data_model(Reader& rd, const json& j, DataModelSpec& s, std::size_t dimension) {
  const std::string path = "data_model";
  if (!rd.object(j, path, {"kind", "amplitude", "truth", "noise"})) return;
  rd.text(j, "kind", path, s.kind);
  if (s.kind != "multiplicative" && s.kind != "location" && s.kind != "rls") {
    rd.issue(path + ".kind", "unknown data model '" + s.kind + "'");
  }
  if (s.kind == "rls") {
    if (j.contains("amplitude")) rd.issue(path + ".amplitude", "not a parameter of the rls model");
    s.truth.assign(dimension, 0.0);
    std::vector<double> truth;
    if (rd.numbers(j, "truth", path, truth)) {
      if (truth.size() != dimension) rd.issue(path + ".truth", "must have d entries");
      else s.truth = truth;
    }
    rd.number(j, "noise", path, s.noise);
    double l1 = 0.0;
    for (double x : s.truth) l1 += std::abs(x);
    if (s.noise < 0.0) rd.issue(path + ".noise", "must be nonnegative");
    if (l1 + s.noise > 1.0) rd.issue(path + ".truth", "|truth|_1 + noise must not exceed 1");
  } else {
    for (const char* k : {"truth", "noise"}) {
      if (j.contains(k)) rd.issue(path + "." + k, "not a parameter of the " + s.kind + " model");
    }
    rd.number(j, "amplitude", path, s.amplitude);
    if (s.amplitude < 0.0) rd.issue(path + ".amplitude", "must be nonnegative");
    if (s.kind == "multiplicative" && s.amplitude > 1.0) rd.issue(path + ".amplitude", "must not exceed 1");
  }
}

void read_gibbs(Reader& rd, const json& j, GibbsSweep& s) {
  const std::string path = "gibbs";
  if (!rd.object(j, path, {"gamma", "lambda", "m", "radius", "sigma", "variant"})) return;
  if (!rd.numbers(j, "gamma", path, s.gamma)) {
    if (!j.contains("gamma")) rd.issue(path + ".gamma", "is required");
  }
  for (double g : s.gamma) {
    if (!(g > 0.0)) rd.issue(path + ".gamma", "entries must be positive");
  }
  rd.numbers(j, "lambda", path, s.lambda);
  for (double l : s.lambda) {
    if (!(l >= 0.0)) rd.issue(path + ".lambda", "entries must be nonnegative");
  }
  rd.numbers(j, "m", path, s.m);
  for (double m : s.m) {
    if (!(m >= 1.0) || m != std::floor(m)) rd.issue(path + ".m", "entries must be positive integers");
  }
  if (j.contains("radius")) {
    const json& r = j.at("radius");
    if (rd.object(r, path + ".radius", {"mode", "values"})) {
      std::string mode = to_string(s.radius_mode);
      rd.text(r, "mode", path + ".radius", mode);
      if (mode == "tuned") s.radius_mode = RadiusMode::tuned;
      else if (mode == "fraction_of_r0") s.radius_mode = RadiusMode::fraction_of_r0;
      else if (mode == "absolute") s.radius_mode = RadiusMode::absolute;
      else rd.issue(path + ".radius.mode", "must be tuned, fraction_of_r0 or absolute");
      rd.numbers(r, "values", path + ".radius", s.radius);
    }
  }
  for (double v : s.radius) {
    if (s.radius_mode == RadiusMode::tuned && !(v > 0.0 && v <= 1.0 / 3.0)) {
      rd.issue(path + ".radius.values", "tuning exponents must lie in (0, 1/3]");
    } else if (!(v > 0.0)) {
      rd.issue(path + ".radius.values", "entries must be positive");
    }
  }
  if (rd.optional_number(j, "sigma", path, s.sigma) && !(*s.sigma > 0.0)) rd.issue(path + ".sigma", "must be positive");
  std::string variant = to_string(s.variant);
  if (rd.text(j, "variant", path, variant)) {
    if (variant == "theorem") s.variant = GenBoundVariant::theorem;
    else if (variant == "hoeffding_stated") s.variant = GenBoundVariant::hoeffding_stated;
    else rd.issue(path + ".variant", "must be theorem or hoeffding_stated");
  }
}

void read_sampler(Reader& rd, const json& j, SamplerSpec& s) {
  const std::string path = "sampler";
  if (!rd.object(j, path, {"kind", "eta", "steps", "burn_in"})) return;
  rd.text(j, "kind", path, s.kind);
  if (!s.kind.empty() && s.kind != "sgld" && s.kind != "metropolis" && s.kind != "exact_gaussian") {
    rd.issue(path + ".kind", "must be sgld, metropolis or exact_gaussian");
  }
  if (rd.optional_number(j, "eta", path, s.eta) && !(*s.eta > 0.0)) rd.issue(path + ".eta", "must be positive");
  rd.count(j, "steps", path, s.steps);
  std::size_t burn = 0;
  if (rd.count(j, "burn_in", path, burn)) s.burn_in = burn;
  if (s.steps <= s.burn_in.value_or(s.steps / 5)) rd.issue(path + ".steps", "must exceed burn_in");
}

void read_oracle(Reader& rd, const json& j, OracleSpec& s) {
  const std::string path = "oracle";
  if (!rd.object(j, path, {"nodes_per_sd", "datasets", "trials"})) return;
  rd.number(j, "nodes_per_sd", path, s.nodes_per_sd);
  if (!(s.nodes_per_sd >= 20.0)) rd.issue(path + ".nodes_per_sd", "must be at least 20");
  rd.count(j, "datasets", path, s.datasets);
  if (s.datasets == 0) rd.issue(path + ".datasets", "must be at least 1");
  rd.count(j, "trials", path, s.trials);
  if (s.trials < 50) rd.issue(path + ".trials", "must be at least 50");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }
  std::vector<std::string> issues;
  Reader rd(issues);
  ExperimentConfig c;
  if (!rd.object(j, "config",
                 {"name", "master_seed", "landscape", "data_model", "gibbs", "sampler", "oracle", "theorems",
                  "output_dir", "workers"})) {
    throw ConfigError(issues);
  }
  rd.text(j, "name", "config", c.name);
  if (!j.contains("master_seed")) {
    rd.issue("config.master_seed", "is required");
  } else if (!j.at("master_seed").is_number_unsigned() && !(j.at("master_seed").is_number_integer() && j.at("master_seed").get<long long>() >= 0)) {
    rd.issue("config.master_seed", "must be a nonnegative integer");
  } else {
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
  }
  if (j.contains("landscape")) read_landscape(rd, j.at("landscape"), c.landscape);
  if (j.contains("data_model")) read_data_model(rd, j.at("data_model"), c.data_model, c.landscape.dimension);
  if (j.contains("gibbs")) read_gibbs(rd, j.at("gibbs"), c.gibbs);
  else rd.issue("config.gibbs", "is required");
  if (j.contains("sampler")) read_sampler(rd, j.at("sampler"), c.sampler);
  if (j.contains("oracle")) read_oracle(rd, j.at("oracle"), c.oracle);

  const bool implied = c.data_model.kind == "location" || c.data_model.kind == "rls";
  if (implied && c.landscape.kind != c.data_model.kind) {
    rd.issue("landscape.kind", "must be '" + c.data_model.kind + "' for the " + c.data_model.kind + " data model");
  }
  if (!implied && (c.landscape.kind == "location" || c.landscape.kind == "rls")) {
    rd.issue("landscape.kind", "'" + c.landscape.kind + "' requires the matching data model");
  }

  if (j.contains("theorems")) {
    const json& t = j.at("theorems");
    std::vector<std::string> names;
    if (t.is_string()) {
      names.push_back(t.get<std::string>());
    } else if (t.is_array()) {
      for (const auto& x : t) {
        if (x.is_string()) names.push_back(x.get<std::string>());
        else rd.issue("config.theorems", "must contain only strings");
      }
    } else {
      rd.issue("config.theorems", "must be a string or a list of strings");
    }
    if (names.empty()) rd.issue("config.theorems", "must not be empty");
    const auto& known = theorem_names();
    for (const auto& n : names) {
      if (std::find(known.begin(), known.end(), n) == known.end()) rd.issue("config.theorems", "unknown theorem '" + n + "'");
    }
    if (!names.empty()) c.theorems = names;
  }
  if (j.contains("output_dir") && !j.at("output_dir").is_null()) {
    std::string dir;
    if (rd.text(j, "output_dir", "config", dir)) c.output_dir = dir;
  }
  rd.count(j, "workers", "config", c.workers);
  if (c.workers == 0) rd.issue("config.workers", "must be at least 1");

  if (!issues.empty()) throw ConfigError(issues);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read configuration file '" + path + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

json to_json(const ExperimentConfig& c) {
  json land = {{"kind", c.landscape.kind},
               {"dimension", c.landscape.dimension},
               {"box", {c.landscape.box_low, c.landscape.box_high}}};
  if (c.landscape.kind == "quadratic") {
    land["curvature"] = c.landscape.curvature;
    land["center"] = c.landscape.center;
    land["offset"] = c.landscape.offset;
  } else if (c.landscape.kind == "spline_double_well") {
    const auto& s = c.landscape.shape;
    land["curvature_left"] = s.curvature_left;
    land["curvature_right"] = s.curvature_right;
    land["center_left"] = s.center_left;
    land["center_right"] = s.center_right;
    land["junction_left"] = s.junction_left;
    land["junction_right"] = s.junction_right;
  }
  json model = {{"kind", c.data_model.kind}};
  if (c.data_model.kind == "rls") {
    model["truth"] = c.data_model.truth;
    model["noise"] = c.data_model.noise;
  } else {
    model["amplitude"] = c.data_model.amplitude;
  }
  json gibbs = {{"gamma", c.gibbs.gamma},
                {"lambda", c.gibbs.lambda},
                {"m", c.gibbs.m},
                {"radius", {{"mode", to_string(c.gibbs.radius_mode)}, {"values", c.gibbs.radius}}},
                {"sigma", c.gibbs.sigma ? json(*c.gibbs.sigma) : json(nullptr)},
                {"variant", to_string(c.gibbs.variant)}};
  json sampler = {{"kind", c.sampler.kind},
                  {"eta", c.sampler.eta ? json(*c.sampler.eta) : json(nullptr)},
                  {"steps", c.sampler.steps},
                  {"burn_in", c.sampler.burn_in ? json(*c.sampler.burn_in) : json(nullptr)}};
  json oracle = {{"nodes_per_sd", c.oracle.nodes_per_sd}, {"datasets", c.oracle.datasets}, {"trials", c.oracle.trials}};
  return {{"name", c.name},
          {"master_seed", c.master_seed},
          {"landscape", land},
          {"data_model", model},
          {"gibbs", gibbs},
          {"sampler", sampler},
          {"oracle", oracle},
          {"theorems", c.theorems},
          {"output_dir", c.output_dir ? json(*c.output_dir) : json(nullptr)},
          {"workers", c.workers}};
}

}  // namespace gibbslab
