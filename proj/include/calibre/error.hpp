#pragma once

#include <stdexcept>
#include <string>

namespace calibre {

// Base class for all errors raised by the library.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Bad input data: invariant violations, malformed files, empty sets.
class validation_error : public error {
 public:
  explicit validation_error(const std::string& what) : error(what) {}
};

// Numerical failure: divergent integrals, degenerate optimization problems.
class numerical_error : public error {
 public:
  explicit numerical_error(const std::string& what) : error(what) {}
};

}  // namespace calibre
