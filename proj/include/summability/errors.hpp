#pragma once

#include <stdexcept>
#include <string>

namespace summability {

// Malformed DSL strings, data files, or numeric literals.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An exact-mode computation whose result is not representable as a rational.
struct ModeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Index outside the domain of a file-backed or budget-limited rule.
struct OutOfRangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Block construction ran out of its index budget before completing a block.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A violated operation precondition (invalid policy, wrong norm, non-wuc input, ...).
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace summability
