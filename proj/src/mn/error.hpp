#pragma once

#include <stdexcept>
#include <string>

namespace mn {

enum class ErrorCode {
  invalid_argument,
  domain,        // argument outside the mathematical domain of an operation
  model,         // scalar model fails a hypothesis or is internally inconsistent
  numeric,       // non-finite values or a numeric subroutine failed to converge
  iteration,     // a generated sequence left its certified interval
  singular,      // singular matrix or failed invertibility precondition
  unknown_name,  // registry or builtin lookup failed
  io,            // file parsing
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace mn
