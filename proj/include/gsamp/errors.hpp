#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gsamp {

/// Mismatched groups, dimensions or malformed arguments.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical precondition (frame, Riesz, invertibility) does not hold.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A brute-force oracle would exceed its configured size cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A square transfer matrix is singular at one or more characters.
/// `characters` holds the offending dual-group coordinates.
class SingularCharacterError : public PreconditionError {
 public:
  SingularCharacterError(std::string what, std::vector<std::vector<int>> characters)
      : PreconditionError(std::move(what)), characters_(std::move(characters)) {}

  const std::vector<std::vector<int>>& characters() const noexcept { return characters_; }

 private:
  std::vector<std::vector<int>> characters_;
};

}  // namespace gsamp
