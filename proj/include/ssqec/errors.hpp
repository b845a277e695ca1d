#pragma once

#include <stdexcept>
#include <string>

namespace ssqec {

/// Operand shapes do not agree (matrix-vector, block assembly, ...).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A derived quantity disagrees with an independent computation of the same
/// quantity. Always signals a construction bug, never bad user input.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The target syndrome is not in the image of the check matrix.
class UnsatisfiableSyndrome : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matching needs every column of the metacheck matrix to have weight <= 2.
class MatchingInapplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Odd number of defects and no boundary to absorb the extra one.
class Unmatchable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exhaustive enumeration would exceed its configured size guard.
class EnumerationInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed file or configuration document.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ssqec
