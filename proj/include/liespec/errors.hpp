#pragma once

#include <stdexcept>
#include <string>

namespace liespec {

/// Bad user input: malformed files, dimension mismatches, violated preconditions.
class input_error : public std::runtime_error {
 public:
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

/// A configured budget or completeness certificate cannot be met.
class resource_error : public std::runtime_error {
 public:
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

/// A mathematical hypothesis required by the requested check does not hold.
class hypothesis_error : public std::runtime_error {
 public:
  explicit hypothesis_error(const std::string& what) : std::runtime_error(what) {}
};

/// Internal numerical failure; indicates a bug or pathological input slipping past validation.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace liespec
