#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace oscpair {

// Invalid input: bad parameters, malformed expressions, preconditions.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The numerics could not deliver: step underflow, singular evaluation,
// ill-conditioned fits.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ConfigError {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : ConfigError(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace oscpair
