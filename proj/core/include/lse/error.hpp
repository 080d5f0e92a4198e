#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lse {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t field, const std::string& what)
        : Error("line " + std::to_string(line) + ", field " + std::to_string(field) + ": " + what),
          line_(line),
          field_(field) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::size_t field_;
};

}  // namespace lse
