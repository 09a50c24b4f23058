#pragma once

#include <stdexcept>
#include <string>

namespace osn {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (edge lists, traces, label sidecars).
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : Error(what) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

/// Invalid arguments or configuration values (negative tolerance, bad window, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// The input is well-formed but violates an analysis precondition
/// (disconnected graph, empty graph, too few samples, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace osn
