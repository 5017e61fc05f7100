#pragma once

#include <stdexcept>
#include <string>

namespace cmatch {

/// Malformed user input: bad parameters, unreadable files, invalid JSON.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simplicial complex that violates closure or indexing rules.
class StructuralError : public InputError {
 public:
  using InputError::InputError;
};

/// Enumeration or group closure exceeded a configured cap.
class SizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Transport could not disambiguate the continuation of a diagram point.
class SingularityEncountered : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tracked point came within the separation constant of the diagonal,
/// or the diagram cardinality changed along a path.
class RegionViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal invariant broken (e.g. a transported table is not a bijection).
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cmatch
