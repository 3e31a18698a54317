#pragma once

#include <stdexcept>
#include <string>

namespace adacurv {

// Coarse failure classes; the CLI maps them onto its exit codes.
enum class ErrorKind {
    usage,      // bad parameters or arguments
    input,      // unreadable/malformed files, invalid meshes
    numerical,  // a computation could not produce a result
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace adacurv
