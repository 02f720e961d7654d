#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gibbslab {

/// Coarse classification used by the CLI to pick an exit status.
enum class ErrorCategory { argument, configuration, numerical };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

/// Invalid argument to a pure function (non-PSD matrix, a <= 0, ...).
class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error(ErrorCategory::argument, what) {}
};

/// Point outside a landscape's experiment domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCategory::argument, what) {}
};

/// A landscape violates isolation of its minima (Newton failure, indefinite Hessian).
class LandscapeError : public Error {
 public:
  explicit LandscapeError(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

/// A structural invariant does not hold (duplicate minima, empty global set).
class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

class DegenerateCurvatureError : public Error {
 public:
  explicit DegenerateCurvatureError(const std::string& what)
      : Error(ErrorCategory::numerical, what) {}
};

/// Radius outside the admissible range (0, r0].
class RadiusError : public Error {
 public:
  explicit RadiusError(const std::string& what) : Error(ErrorCategory::argument, what) {}
};

/// Sampler kind incompatible with the target (exact Gaussian on a non-quadratic risk).
class KindError : public Error {
 public:
  explicit KindError(const std::string& what) : Error(ErrorCategory::argument, what) {}
};

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double step_size)
      : Error(ErrorCategory::numerical, what), step_size_(step_size) {}
  double step_size() const noexcept { return step_size_; }

 private:
  double step_size_;
};

class InsufficientConditioningError : public Error {
 public:
  InsufficientConditioningError(const std::string& what, std::size_t retained)
      : Error(ErrorCategory::numerical, what), retained_(retained) {}
  std::size_t retained() const noexcept { return retained_; }

 private:
  std::size_t retained_;
};

/// Caller broke a usage contract (e.g. an unconditioned batch where a conditioned one is required).
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(ErrorCategory::argument, what) {}
};

/// Quadrature failed its Richardson check.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, std::size_t suggested_nodes_per_sd)
      : Error(ErrorCategory::numerical, what), suggested_(suggested_nodes_per_sd) {}
  std::size_t suggested_nodes_per_sd() const noexcept { return suggested_; }

 private:
  std::size_t suggested_;
};

/// Experiment configuration failed validation; carries every violated field.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

}  // namespace gibbslab
