#pragma once

#include <stdexcept>
#include <string>

namespace pcrit {

/// Error categories surfaced through the C API as status codes.
enum class ErrorCode {
    InvalidArgument = 1,
    InvalidModel = 2,
    InvalidSet = 3,
    SupportViolation = 4,
    NonConvergence = 5,
    Io = 6,
    Parse = 7,
    Unsupported = 8,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by iterative solvers that hit their iteration cap.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, double residual)
        : Error(ErrorCode::NonConvergence, what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
    if (!condition) fail(code, what);
}

} // namespace pcrit
