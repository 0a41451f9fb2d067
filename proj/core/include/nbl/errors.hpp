#pragma once

#include <stdexcept>
#include <string>

namespace nbl {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive enumeration would exceed its configured cap.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input (graph, model, configuration).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A file could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Wrong number of neighbor beliefs passed to a belief update.
class ArityError : public Error {
 public:
  using Error::Error;
};

// The scheduler ran out of events while some live agent still waited on a quorum.
class DeadlockError : public Error {
 public:
  using Error::Error;
};

// A result that can only come from an implementation defect (e.g. the two
// detectability conditions disagreeing).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace nbl
