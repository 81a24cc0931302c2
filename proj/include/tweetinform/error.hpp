// SPDX-FileCopyrightText: (c) 2026 The tweetinform authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ti {

/// Base of every exception raised by the library. `kind()` is a short
/// machine-parsable tag used by the CLI error line.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
    virtual const char* kind() const noexcept { return "error"; }
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const noexcept { return line_; }
    const char* kind() const noexcept override { return "parse"; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "validation"; }
};

class ShapeError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "shape"; }
};

class NumericError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "numeric"; }
};

class IoError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "io"; }
};

} // namespace ti
