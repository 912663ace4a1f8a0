#pragma once

#include <stdexcept>
#include <string>

namespace voltkit {

enum class ErrorKind {
    InvalidRank,
    InvalidRoot,
    Parse,
    VariableMismatch,
    IndexOutOfRange,
    Constraint,
    SearchTooLarge,
    Unimplemented,
    Divergence,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Thrown by the RK4 driver when the state stops being finite.
class DivergenceError : public Error {
public:
    DivergenceError(double time, const std::string& what)
        : Error(ErrorKind::Divergence, what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace voltkit
