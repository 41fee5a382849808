#pragma once

#include <stdexcept>
#include <string>

namespace promips {

// Bad caller input: dimension mismatch, out-of-range parameter, empty data.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed file contents (index files, fvecs/csv ingestion).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition between internal stages was broken, e.g.
// Condition B evaluated on a non-positive denominator.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace promips
