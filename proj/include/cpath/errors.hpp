#pragma once

#include <stdexcept>
#include <string>

namespace cpath {

/// Base error carrying the pipeline stage that failed ("load-csv",
/// "train", "bridge", ...). The CLI maps subclasses onto exit codes:
/// ConfigError -> 2, ModelError -> 3, EmptyResultError -> 4.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}

  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Bad input data, arguments or file contents.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Model training/prediction failures and external-bridge protocol faults.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A run that finished but produced no counterfactual paths.
class EmptyResultError : public Error {
 public:
  using Error::Error;
};

}  // namespace cpath
