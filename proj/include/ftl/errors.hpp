#ifndef FTL_ERRORS_HPP
#define FTL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ftl {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// An argument outside the documented domain of an operation
// (mixed towers, an index out of range, a malformed input).
struct RejectedInput : Error {
  explicit RejectedInput(const std::string& msg) : Error(msg) {}
};

// A caller broke a stated precondition (point not on the curve,
// multiplicity shortfall, reducible conic where an irreducible one
// is required).
struct ContractViolation : Error {
  explicit ContractViolation(const std::string& msg) : Error(msg) {}
};

struct DivisionByZero : Error {
  explicit DivisionByZero(const std::string& msg) : Error(msg) {}
};

// Two candidate generators span fewer than n^2 points of E[n].
struct IndependenceFailure : Error {
  IndependenceFailure(const std::string& msg, std::size_t achieved)
      : Error(msg), achieved_count(achieved) {}
  std::size_t achieved_count;
};

// A structural fact the construction relies on failed to hold
// (catalog size, stratum count, a residual landing on the cubic).
struct CensusError : Error {
  explicit CensusError(const std::string& msg) : Error(msg) {}
};

// A named verification check failed.
struct VerificationFailure : Error {
  VerificationFailure(const std::string& check, const std::string& msg)
      : Error(check + ": " + msg), check_name(check) {}
  std::string check_name;
};

// A condition that the code itself must make impossible.
struct InternalError : Error {
  explicit InternalError(const std::string& msg) : Error(msg) {}
};

}  // namespace ftl

#endif
