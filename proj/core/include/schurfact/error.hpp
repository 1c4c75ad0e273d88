#pragma once

#include <stdexcept>
#include <string>

namespace schurfact {

enum class ErrorCode {
  InvalidMatrix,
  NotSquare,
  NotHermitian,
  NotPsd,
  NotSelfAdjoint,
  ShapeMismatch,
  ZeroMatrix,
  GridTooLarge,
  IterationCap,
  BracketInvalid,
  LpInfeasible,
  LpUnbounded,
  ParseError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace schurfact
