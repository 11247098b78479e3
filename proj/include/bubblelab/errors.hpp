#pragma once

#include <stdexcept>
#include <string>

namespace bubblelab {

// Status codes shared with the C API (and with the CLI exit codes).
enum class Status : int {
    ok = 0,
    numerical_failure = 1,
    invalid_input = 2,
    io_error = 3,
    undefined_bound = 4,
};

class Error : public std::runtime_error {
public:
    Error(Status code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Status code() const { return code_; }

private:
    Status code_;
};

struct InvalidInputError : Error {
    explicit InvalidInputError(const std::string& msg) : Error(Status::invalid_input, msg) {}
};

struct NumericalFailureError : Error {
    explicit NumericalFailureError(const std::string& msg) : Error(Status::numerical_failure, msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(Status::io_error, msg) {}
};

struct UndefinedBoundError : Error {
    explicit UndefinedBoundError(const std::string& msg) : Error(Status::undefined_bound, msg) {}
};

}  // namespace bubblelab
