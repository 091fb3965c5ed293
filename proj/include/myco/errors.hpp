#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace myco {

// File could not be read, written, or decoded.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structured input (CSV, layout, grid, checkpoint, config) is malformed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration rejected; carries every issue found, not just the first.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// The integrator produced a non-finite value.
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(long long iteration);
  long long iteration() const { return iteration_; }

 private:
  long long iteration_;
};

}  // namespace myco
