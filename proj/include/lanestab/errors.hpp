#pragma once

#include <stdexcept>
#include <string>

namespace lanestab {

/// Invalid user input. `field()` names the offending parameter.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A numerical procedure failed to produce a result (root bracketing,
/// step size control, iteration limits).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lanestab
