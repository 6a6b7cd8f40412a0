#pragma once

#include <stdexcept>
#include <string>

namespace eccpow {

enum class ErrorCode {
    param = 1,   // invalid parameter or malformed value
    dimension,   // operand size mismatch
    degenerate,  // degenerate data (e.g. zero-width sample range)
    domain,      // value outside a function's mathematical domain
    config,      // malformed configuration document
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

}  // namespace eccpow
