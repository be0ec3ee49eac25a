#pragma once

#include <stdexcept>
#include <string>

namespace dtangle {

// Malformed serialized input (graph text, certificates, pair lists).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An exponential search would exceed its configured instance-size guard.
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A guess loop ran out of its configured budget without deciding.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dtangle
