#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rugscope {

enum class ErrorCode {
    Parse,
    Io,
    MalformedEvent,
    ProjectMismatch,
    EmptyTimeline,
    EmptySequence,
    IndexOutOfRange,
    NoMint,
    TooYoung,
    NotApplicable,
    MissingSupply,
    EmptyReferenceList,
    CutoffBeforeLaunch,
    EmptyClass,
    NonFinite,
    FoldTooSmall,
    DimensionMismatch,
    SchemaMismatch,
    StateCorrupt,
    InvalidCounts,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised on the first malformed line of a JSON-Lines input. Line numbers are 1-based.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& reason)
        : Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + reason),
          line_(line),
          reason_(reason) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

}  // namespace rugscope
