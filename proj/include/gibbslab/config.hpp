#pragma once

#include "gibbslab/bounds.hpp"
#include "gibbslab/landscape.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gibbslab {

struct LandscapeSpec {
  std::string kind = "double_well";  ///< quadratic | double_well | spline_double_well
  std::size_t dimension = 1;
  double box_low = -2.5;
  double box_high = 2.5;
  /// quadratic: symmetric curvature matrix (rows), center and offset.
  std::vector<std::vector<double>> curvature;
  std::vector<double> center;
  double offset = 0.0;
  SplineDoubleWellLandscape::Shape shape;
};

struct DataModelSpec {
  std::string kind = "multiplicative";  ///< multiplicative | location | rls
  double amplitude = 0.0;
  std::vector<double> truth;  ///< rls
  double noise = 0.1;         ///< rls
};

enum class RadiusMode { tuned, fraction_of_r0, absolute };
std::string to_string(RadiusMode mode);

struct GibbsSweep {
  std::vector<double> gamma;
  std::vector<double> lambda = {0.0};
  std::vector<double> m = {1000.0};
  RadiusMode radius_mode = RadiusMode::fraction_of_r0;
  /// p for tuned, a fraction of r0, or r itself.
  std::vector<double> radius = {0.5};
  std::optional<double> sigma;
  GenBoundVariant variant = GenBoundVariant::hoeffding_stated;
};

struct SamplerSpec {
  std::string kind;  ///< empty: exact_gaussian when the Hessian is constant, metropolis otherwise
  std::optional<double> eta;
  std::size_t steps = 2000;
  std::optional<std::size_t> burn_in;
};

struct OracleSpec {
  double nodes_per_sd = 20.0;
  std::size_t datasets = 4;  ///< datasets averaged by the local excess oracle
  std::size_t trials = 50;   ///< datasets for the generalization gap
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t master_seed = 0;
  LandscapeSpec landscape;
  DataModelSpec data_model;
  GibbsSweep gibbs;
  SamplerSpec sampler;
  OracleSpec oracle;
  std::vector<std::string> theorems = {"local_excess"};
  std::optional<std::string> output_dir;
  std::size_t workers = 1;
};

/// Theorem names accepted in `theorems`, in report order.
const std::vector<std::string>& theorem_names();

/// Parses JSON (comments allowed). ConfigError lists every violated field; unknown keys are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Canonical form: every field present, sweep fields as lists.
nlohmann::json to_json(const ExperimentConfig& config);

}  // namespace gibbslab
