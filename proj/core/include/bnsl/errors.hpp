#pragma once

#include <stdexcept>

namespace bnsl {

/// Malformed or inconsistent configuration (knowledge files, experiment
/// configs, unknown algorithm names).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problems with observed data: ragged CSV rows, values outside a declared
/// schema, missing cells where a routine requires complete data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bnsl
