#pragma once

#include <stdexcept>
#include <string>

namespace bellviol {

// Malformed textual input: state specs, operator specs, density files.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Well-formed input that violates a physical invariant. `field()` names the
// invariant that failed ("trace", "hermiticity", "psd", ...).
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Operator or method combination that has no meaning (e.g. a closed-form
// formula requested for an operator kind that has none).
class IncompatibleError : public std::runtime_error {
 public:
  explicit IncompatibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bellviol
