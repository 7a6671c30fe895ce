#pragma once

#include <stdexcept>
#include <string>

namespace edhg {

// Input that parses but violates a contract (bad flag values, unknown POI,
// malformed-line budget exceeded, ...).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or unwritable file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Training produced non-finite embeddings.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long long step)
      : std::runtime_error(what), step_(step) {}
  long long step() const { return step_; }

 private:
  long long step_;
};

}  // namespace edhg
