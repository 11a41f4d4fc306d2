#pragma once

#include <stdexcept>
#include <string>

namespace gme {

// Serialized input that cannot be read at all: malformed syntax, missing
// fields, wrong array sizes.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Which physical invariant a rejected object violated.
enum class ValidationIssue { Norm, Hermiticity, Trace, Positivity };

const char* to_string(ValidationIssue issue) noexcept;

// Input that parses but fails physical validation.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(ValidationIssue issue, const std::string& what);
  ValidationIssue issue() const noexcept { return issue_; }

 private:
  ValidationIssue issue_;
};

// A request that exceeds what a component supports (size caps, exhausted
// fixed unitary sequences).
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gme
