#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace creature {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the caller's cardinality budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, double estimate)
      : Error(what + " (estimated " + std::to_string(estimate) + " items)"), estimate_(estimate) {}
  double estimate() const noexcept { return estimate_; }

 private:
  double estimate_;
};

/// The object is only known symbolically (e.g. by its double logarithm)
/// and has no explicit element list.
class NotEnumerable : public Error {
 public:
  using Error::Error;
};

}  // namespace creature
