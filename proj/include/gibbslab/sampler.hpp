#pragma once

#include "gibbslab/bounds.hpp"
#include "gibbslab/landscape.hpp"
#include "gibbslab/objective.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gibbslab {

enum class SamplerKind { sgld, metropolis, exact_gaussian };

std::string to_string(SamplerKind kind);
SamplerKind sampler_kind_from_string(const std::string& s);

struct ChainBatch {
  std::vector<Vector> samples;
  SamplerKind kind = SamplerKind::metropolis;
  std::uint64_t master_seed = 0;
  std::uint64_t chain_id = 0;
  double step_size = 0.0;
  std::size_t burn_in = 0;
  std::size_t steps = 0;
  std::optional<double> acceptance_rate;
  bool conditioned = false;
  /// Fraction of samples kept by condition_on_region.
  std::optional<double> retained_fraction;
};

/// Union of ellipsoids, or its complement within the domain. An empty complement region
/// is the whole domain.
struct Region {
  std::vector<EllipsoidSpec> ellipsoids;
  bool complement = false;

  bool contains(const Vector& w) const;
  static Region whole() { return {{}, true}; }
};

/// splitmix64 finalizer of (master_seed, chain_id).
std::uint64_t chain_seed(std::uint64_t master_seed, std::uint64_t chain_id);

/// 0.5 / (gamma * lambda_max) of the objective Hessian at w (|lambda| or 1 when degenerate).
double default_step_size(const Objective& objective, double gamma, const Vector& w);

/// Minimum retained samples accepted by condition_on_region.
inline constexpr std::size_t kMinConditionedSamples = 100;

/// Draws from e^{-gamma F}. sgld: w - eta grad F + sqrt(2 eta / gamma) xi (gamma = inf gives
/// no noise). metropolis: Gaussian random walk with standard deviation eta, proposals outside the
/// domain rejected. exact_gaussian: i.i.d. N(argmin F, (gamma H)^{-1}), constant-Hessian F only.
/// `start` defaults to the domain center.
ChainBatch sample_chain(SamplerKind kind, const Objective& objective, const GibbsConfig& config, double eta,
                        std::size_t steps, std::size_t burn_in, std::uint64_t master_seed, std::uint64_t chain_id,
                        const std::optional<Vector>& start = std::nullopt);

/// Runs chains 0..chains-1 on up to `workers` threads; merged in chain_id order.
ChainBatch sample_chains(SamplerKind kind, const Objective& objective, const GibbsConfig& config, double eta,
                         std::size_t steps, std::size_t burn_in, std::uint64_t master_seed, std::size_t chains,
                         std::size_t workers, const std::optional<Vector>& start = std::nullopt);

/// Concatenation ordered by chain_id.
ChainBatch merge_batches(std::vector<ChainBatch> batches);

/// Keeps samples inside `region`, in order. InsufficientConditioningError below 100 samples.
ChainBatch condition_on_region(const ChainBatch& batch, const Region& region);

}  // namespace gibbslab
