#include "gme/errors.hpp"

namespace gme {

const char* to_string(ValidationIssue issue) noexcept {
  switch (issue) {
    case ValidationIssue::Norm:
      return "norm";
    case ValidationIssue::Hermiticity:
      return "hermiticity";
    case ValidationIssue::Trace:
      return "trace";
    case ValidationIssue::Positivity:
      return "positivity";
  }
  return "unknown";
}

ValidationError::ValidationError(ValidationIssue issue, const std::string& what)
    : std::runtime_error(std::string(to_string(issue)) + ": " + what), issue_(issue) {}

}  // namespace gme
