#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace h10 {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed polynomial text. `position` is the 0-based byte offset of the
/// offending character.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " at position " + std::to_string(position)), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// A configured size limit (search space, basis dimension, exact float range) was exceeded.
class GuardError : public Error {
public:
    using Error::Error;
};

/// Linear solve failure, eigen solver non-convergence, NaN/Inf in a state.
class NumericError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace h10
