#include "gibbslab/errors.hpp"

namespace gibbslab {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = "invalid configuration:";
  for (const auto& issue : issues) {
    out += "\n  - ";
    out += issue;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : Error(ErrorCategory::configuration, join_issues(issues)), issues_(std::move(issues)) {}

}  // namespace gibbslab
