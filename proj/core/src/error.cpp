#include "schurfact/error.hpp"

namespace schurfact {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPsd: return "NotPSD";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::IterationCap: return "IterationCap";
    case ErrorCode::BracketInvalid: return "BracketInvalid";
    case ErrorCode::LpInfeasible: return "Infeasible";
    case ErrorCode::LpUnbounded: return "Unbounded";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace schurfact
