#pragma once

#include <stdexcept>
#include <string>

namespace tpp {

/// Failure categories surfaced by the library. The CLI maps these onto
/// distinct process exit codes.
enum class ErrorKind {
  invalid_input,       // malformed distribution, bad parameters, schema errors
  guard_violation,     // a documented resource guard was exceeded (n, depth caps)
  assumption_failure,  // instance violates Assumptions 1-3
  infeasible,          // the operation cannot produce a feasible result here
  no_candidate,        // every enumerated height vector was discarded
  resource_cap,        // DP frontier or enumeration exceeded its state cap
  internal,            // broken invariant; indicates a bug
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace tpp
