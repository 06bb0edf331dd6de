#pragma once

#include <stdexcept>
#include <string>

namespace cda {

/// A coefficient or data field produced a non-finite value or threw.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Linear solve did not reach the requested residual.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Bad configuration value; `field` names the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace cda
