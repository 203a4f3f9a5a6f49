#pragma once

#include <stdexcept>
#include <string>

namespace acw {

enum class ErrorKind {
    AmbientMismatch,
    WindowOverflow,
    InvalidArgument,
    EmptySet,
    UnsupportedOperation,
    UniverseTooLarge,
    HypothesisViolation,
    PreconditionViolation,
    Overflow,
    Undecidable,
    NonConvex,
    OffTable,
    UnknownSpec,
    MissingInput,
    ExactFailure,
    Parse,
    Io,
    Internal,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace acw
