#pragma once

#include <stdexcept>
#include <string>

namespace cascata {

enum class ErrorCode {
    io = 1,      // unreadable/unwritable file or stream
    parse = 2,   // malformed input that cannot be skipped
    invalid = 3, // bad argument or configuration
    empty = 4,   // no usable data
    numeric = 5, // degenerate or insufficient data for an estimator
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrorCode::io, msg); }
[[noreturn]] inline void throw_parse(const std::string& msg) { throw Error(ErrorCode::parse, msg); }
[[noreturn]] inline void throw_invalid(const std::string& msg) { throw Error(ErrorCode::invalid, msg); }
[[noreturn]] inline void throw_empty(const std::string& msg) { throw Error(ErrorCode::empty, msg); }
[[noreturn]] inline void throw_numeric(const std::string& msg) { throw Error(ErrorCode::numeric, msg); }

} // namespace cascata
