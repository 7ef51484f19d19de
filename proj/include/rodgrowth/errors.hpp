#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rodgrowth {

// Tridiagonal elimination hit a zero or unusable pivot.
class singular_system_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bracket expansion exhausted its doubling budget without a sign change.
class no_bracket_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iteration produced a non-finite value or failed to meet its tolerance.
class numeric_failure_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evaluation point outside the field's domain (beyond the 1e-12 slack).
class out_of_domain_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Field values are not strictly increasing where inversion requires it.
class not_monotone_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inversion target lies outside the attained value range.
class out_of_range_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A material or transport coefficient violates its positivity requirement.
class invalid_coefficient_error : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A stretch argument left the admissible range p > 0.
class invalid_stretch_error : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The growth field lost positivity; the quasi-stationary reduction is void.
class growth_collapse_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Current-configuration data does not match the deformation that produced it.
class inconsistent_geometry_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A scenario document is syntactically valid JSON but semantically unusable.
class validation_error : public std::runtime_error {
public:
  validation_error(std::string summary, std::vector<std::string> issues)
      : std::runtime_error(join(summary, issues)), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

private:
  static std::string join(const std::string& summary, const std::vector<std::string>& issues) {
    std::string out = summary;
    for (const auto& issue : issues) {
      out += "\n  - ";
      out += issue;
    }
    return out;
  }

  std::vector<std::string> issues_;
};

// Malformed scenario document (not parseable as JSON at all).
class parse_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rodgrowth
