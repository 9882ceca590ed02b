#pragma once

#include <stdexcept>
#include <string>

namespace algpt {

/// Raised when an operation is called outside its mathematical domain
/// (zero polynomial, wrong degree, empty family, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an exact membership or comparison could not be resolved within
/// the refinement cap. Carries a printable description of the offending input.
class undecided_error : public std::runtime_error {
 public:
  undecided_error(const std::string& what, std::string subject)
      : std::runtime_error(what + ": " + subject), subject_(std::move(subject)) {}
  const std::string& subject() const noexcept { return subject_; }

 private:
  std::string subject_;
};

/// Invalid user configuration (CLI flags, region literals).
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace algpt
