#include "gibbslab/sampler.hpp"

#include "gibbslab/errors.hpp"
#include "gibbslab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gibbslab {

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::sgld: return "sgld";
    case SamplerKind::metropolis: return "metropolis";
    case SamplerKind::exact_gaussian: return "exact_gaussian";
  }
  return "unknown";
}

SamplerKind sampler_kind_from_string(const std::string& s) {
  if (s == "sgld") return SamplerKind::sgld;
  if (s == "metropolis") return SamplerKind::metropolis;
  if (s == "exact_gaussian") return SamplerKind::exact_gaussian;
  throw ArgumentError("unknown sampler kind '" + s + "'");
}

bool Region::contains(const Vector& w) const {
  bool inside = false;
  for (const auto& e : ellipsoids) {
    if (e.contains(w)) {
      inside = true;
      break;
    }
  }
  return complement ? !inside : inside;
}

std::uint64_t chain_seed(std::uint64_t master_seed, std::uint64_t chain_id) {
  std::uint64_t z = master_seed + 0x9E3779B97F4A7C15ULL * (chain_id + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double default_step_size(const Objective& objective, double gamma, const Vector& w) {
  const Vector eig = symmetric_eigenvalues(objective.jet(w).hessian);
  double lmax = eig.cwiseAbs().maxCoeff();
  if (!(lmax > 0.0)) lmax = 1.0;
  return 0.5 / (gamma * lmax);
}

namespace {

void run_sgld(ChainBatch& out, const Objective& f, double gamma, double eta, Vector w, std::mt19937_64& rng) {
  const Box& box = f.domain();
  const Vector slack = 10.0 * box.widths();
  const Vector lo = box.lower - slack;
  const Vector hi = box.upper + slack;
  const double noise = std::isinf(gamma) ? 0.0 : std::sqrt(2.0 * eta / gamma);
  std::normal_distribution<double> normal;
  Vector xi(w.size());
  for (std::size_t t = 0; t < out.steps; ++t) {
    for (Eigen::Index k = 0; k < xi.size(); ++k) xi[k] = normal(rng);
    w = w - eta * f.jet(w).gradient + noise * xi;
    if (!w.allFinite() || (w.array() < lo.array()).any() || (w.array() > hi.array()).any()) {
      throw DivergenceError("sgld iterate left the domain by more than 10 box widths at step size eta = " +
                                std::to_string(eta),
                            eta);
    }
    if (t >= out.burn_in) out.samples.push_back(w);
  }
}

void run_metropolis(ChainBatch& out, const Objective& f, double gamma, double eta, Vector w, std::mt19937_64& rng) {
  const Box& box = f.domain();
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double fw = f.value(w);
  std::size_t accepted = 0;
  Vector proposal(w.size());
  for (std::size_t t = 0; t < out.steps; ++t) {
    for (Eigen::Index k = 0; k < w.size(); ++k) proposal[k] = w[k] + eta * normal(rng);
    const double u = unif(rng);
    if (box.contains(proposal)) {
      const double fp = f.value(proposal);
      if (std::log(u) < -gamma * (fp - fw)) {
        w = proposal;
        fw = fp;
        ++accepted;
      }
    }
    if (t >= out.burn_in) out.samples.push_back(w);
  }
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(out.steps);
}

void run_exact(ChainBatch& out, const Objective& f, double gamma, std::mt19937_64& rng) {
  if (!f.has_constant_hessian()) throw KindError("exact_gaussian requires a constant-Hessian objective");
  if (std::isinf(gamma)) throw KindError("exact_gaussian requires a finite gamma");
  const auto d = static_cast<Eigen::Index>(f.dimension());
  const RiskJet j = f.jet(Vector::Zero(d));
  Eigen::LLT<Matrix> llt(j.hessian);
  if (llt.info() != Eigen::Success) throw KindError("exact_gaussian requires a positive definite Hessian");
  const Vector mean = -llt.solve(j.gradient);
  // H = L L^T, so L^{-T} xi / sqrt(gamma) has covariance (gamma H)^{-1}.
  const Matrix upper = llt.matrixU();
  std::normal_distribution<double> normal;
  Vector xi(d);
  const double scale = 1.0 / std::sqrt(gamma);
  for (std::size_t t = 0; t < out.steps; ++t) {
    for (Eigen::Index k = 0; k < d; ++k) xi[k] = normal(rng);
    if (t < out.burn_in) continue;
    out.samples.push_back(mean + scale * upper.triangularView<Eigen::Upper>().solve(xi));
  }
}

}  // namespace

ChainBatch sample_chain(SamplerKind kind, const Objective& objective, const GibbsConfig& config, double eta,
                        std::size_t steps, std::size_t burn_in, std::uint64_t master_seed, std::uint64_t chain_id,
                        const std::optional<Vector>& start) {
  if (!(config.gamma > 0.0)) throw ArgumentError("sample_chain: gamma must be positive");
  if (kind != SamplerKind::exact_gaussian && !(eta > 0.0)) throw ArgumentError("sample_chain: eta must be positive");
  if (!(steps > burn_in)) throw ArgumentError("sample_chain: steps must exceed burn_in");
  Vector w = start ? *start : objective.domain().center();
  if (static_cast<std::size_t>(w.size()) != objective.dimension()) {
    throw ArgumentError("sample_chain: start point dimension differs from the objective");
  }

  ChainBatch out;
  out.kind = kind;
  out.master_seed = master_seed;
  out.chain_id = chain_id;
  out.step_size = eta;
  out.steps = steps;
  out.burn_in = burn_in;
  out.samples.reserve(steps - burn_in);
  std::mt19937_64 rng(chain_seed(master_seed, chain_id));
  switch (kind) {
    case SamplerKind::sgld: run_sgld(out, objective, config.gamma, eta, std::move(w), rng); break;
    case SamplerKind::metropolis:
      if (std::isinf(config.gamma)) throw ArgumentError("metropolis requires a finite gamma");
      run_metropolis(out, objective, config.gamma, eta, std::move(w), rng);
      break;
    case SamplerKind::exact_gaussian: run_exact(out, objective, config.gamma, rng); break;
  }
  return out;
}

ChainBatch merge_batches(std::vector<ChainBatch> batches) {
  if (batches.empty()) throw ArgumentError("merge_batches: nothing to merge");
  std::sort(batches.begin(), batches.end(),
            [](const ChainBatch& a, const ChainBatch& b) { return a.chain_id < b.chain_id; });
  ChainBatch out = std::move(batches.front());
  double accepted = out.acceptance_rate.value_or(0.0) * static_cast<double>(out.steps);
  std::size_t total_steps = out.steps;
  for (std::size_t i = 1; i < batches.size(); ++i) {
    auto& b = batches[i];
    out.samples.insert(out.samples.end(), std::make_move_iterator(b.samples.begin()),
                       std::make_move_iterator(b.samples.end()));
    accepted += b.acceptance_rate.value_or(0.0) * static_cast<double>(b.steps);
    total_steps += b.steps;
    out.burn_in += b.burn_in;
  }
  if (out.acceptance_rate) out.acceptance_rate = accepted / static_cast<double>(total_steps);
  out.steps = total_steps;
  return out;
}

ChainBatch sample_chains(SamplerKind kind, const Objective& objective, const GibbsConfig& config, double eta,
                         std::size_t steps, std::size_t burn_in, std::uint64_t master_seed, std::size_t chains,
                         std::size_t workers, const std::optional<Vector>& start) {
  if (chains == 0) throw ArgumentError("sample_chains: need at least one chain");
  std::vector<ChainBatch> batches(chains);
  parallel_for(chains, workers, [&](std::size_t c) {
    batches[c] = sample_chain(kind, objective, config, eta, steps, burn_in, master_seed, c, start);
  });
  return merge_batches(std::move(batches));
}

ChainBatch condition_on_region(const ChainBatch& batch, const Region& region) {
  if (batch.samples.empty()) throw ArgumentError("condition_on_region: empty batch");
  ChainBatch out = batch;
  out.samples.clear();
  for (const Vector& w : batch.samples) {
    if (region.contains(w)) out.samples.push_back(w);
  }
  out.conditioned = true;
  out.retained_fraction = static_cast<double>(out.samples.size()) / static_cast<double>(batch.samples.size());
  if (out.samples.size() < kMinConditionedSamples) {
    throw InsufficientConditioningError("condition_on_region: only " + std::to_string(out.samples.size()) +
                                            " samples fall in the region",
                                        out.samples.size());
  }
  return out;
}

}  // namespace gibbslab
