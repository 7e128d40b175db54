#pragma once

#include <stdexcept>
#include <string>

namespace mpdcnn {

// Error categories map one-to-one onto C API status codes and CLI exit codes.
enum class ErrorKind {
    argument,  // bad parameters, malformed config, misuse of an op contract
    data,      // dataset or input validation failure
    io,        // filesystem problems
    format,    // checkpoint / serialized payload corruption or version mismatch
    numeric,   // NaN/Inf detected, diverged training, tolerance exceeded
    internal,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& msg) {
    throw Error(kind, msg);
}

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
    if (!cond) raise(kind, msg);
}

}  // namespace mpdcnn
