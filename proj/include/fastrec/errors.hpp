#pragma once

#include <stdexcept>
#include <string>

namespace fastrec {

// Malformed or inconsistent input data (bad CSV row, invariant violation).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Request that cannot be satisfied: infeasible synthetic spec, or an
// instance exceeding the exact-search size guard.
struct GuardError : std::runtime_error {
  explicit GuardError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fastrec
