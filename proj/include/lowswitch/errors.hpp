#pragma once

#include <stdexcept>
#include <string>

namespace lowswitch {

// Raised when an episode budget cannot give every planned policy at least one
// episode.
class BudgetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an operation is called outside its documented domain (for
// example, an argmax over an empty version space).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised when a model or report breaks one of its structural invariants. The
// message always names the violated invariant.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lowswitch
