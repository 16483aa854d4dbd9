#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kusuoka {

enum class ErrorKind {
    NotHermitian,
    NotUnitary,
    NotPsd,
    NoConvergence,
    DimensionMismatch,
    BadDimension,
    ZeroElement,
    SumNotIdentity,
    WrongPovmKind,
    ZeroProbabilityBranch,
    EmptyString,
    InvalidArgument,
    TooManyOutcomes,
    EnumerationTooLarge,
    NoFixedPoint,
    Inconsistent,
    ParseError,
    SchemaError,
    ValidationError,
};

std::string_view to_string(ErrorKind kind);

// Guard violations are resource limits rather than malformed input; the CLI
// maps them to a distinct exit code.
bool is_guard(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace kusuoka
