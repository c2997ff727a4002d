#ifndef KATZUP_ERROR_HPP
#define KATZUP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace katzup {

// Numeric values are part of the C ABI (see katzup.h); append only.
enum class ErrorCode : int {
    Ok = 0,
    MalformedLine = 1,
    SelfLoop = 2,
    IndexOutOfRange = 3,
    UnsupportedHeader = 4,
    MalformedEntry = 5,
    TooManyEdges = 6,
    InvalidParameters = 7,
    MissingElement = 8,
    DimensionMismatch = 9,
    NoConvergence = 10,
    NotPositiveDefinite = 11,
    IsolatedNode = 12,
    EmptyGraph = 13,
    InvalidDepth = 14,
    IntegerOverflow = 15,
    Io = 16,
    Disconnected = 17,
    BoundViolation = 18,
    Internal = 99,
};

const char *to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) { throw Error(code, what); }

} // namespace katzup

#endif // KATZUP_ERROR_HPP
