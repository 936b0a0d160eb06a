#pragma once

#include <stdexcept>
#include <string>

namespace kdvnf {

// Every failure raised by the library derives from Error so that callers can
// map them to exit codes in one place.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : Error {
    using Error::Error;
};

struct BoundedResourceError : Error {
    using Error::Error;
};

struct SingularMultiplierError : Error {
    using Error::Error;
};

struct GridMismatchError : Error {
    using Error::Error;
};

struct ConvergenceError : Error {
    using Error::Error;
};

struct DataTooLargeError : Error {
    using Error::Error;
};

struct InstabilityError : Error {
    using Error::Error;
};

struct ResolutionError : Error {
    using Error::Error;
};

struct DegenerateRegressionError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    ValidationError(std::string key, const std::string& what)
        : Error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct ParseError : Error {
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace kdvnf
