#pragma once

#include <stdexcept>
#include <string>

namespace oval {

enum class Errc {
    InvalidPose,
    OutOfBounds,
    InvalidDetection,
    InvalidState,
    InvalidCall,
    NotFound,
    EmptyReport,
    GenerationFailed,
    Unreachable,
    ParseError,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) {
    throw Error(code, what);
}

} // namespace oval
