#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nearzero {

// Malformed or out-of-range input supplied by a caller.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A documented precondition of an operation does not hold.
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A search produced a witness that failed replay. Pipelines throw this
// instead of returning the witness.
class WitnessRejected : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text that does not match a grammar. position is a 0-based byte offset.
class ParseError : public InvalidInput {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InvalidInput(what + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace nearzero
