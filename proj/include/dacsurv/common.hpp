#pragma once

#include <stdexcept>
#include <string>

namespace dacsurv {

// Invalid or inconsistent input data (bad CSV, violated dataset invariants,
// out-of-range configuration). Maps to CLI exit code 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure (non-convergence, singular information matrix,
// linear predictor overflow). Maps to CLI exit code 4.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr int kSchemaVersion = 1;

}  // namespace dacsurv
