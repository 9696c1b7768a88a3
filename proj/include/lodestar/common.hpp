#pragma once

#include <stdexcept>
#include <string>

namespace lodestar {

/// Raised on malformed or inconsistent input data (files, manifests, frames).
class data_error : public std::runtime_error {
 public:
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a numerical procedure cannot produce a usable result.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lodestar
