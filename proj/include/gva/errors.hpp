#pragma once

#include <stdexcept>
#include <string>

namespace gva {

// Malformed or inconsistent input data (CSV files, schemas, result files).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A triangular factor whose diagonal is too small to solve against.
class SingularFactorError : public std::runtime_error {
 public:
  explicit SingularFactorError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gva
