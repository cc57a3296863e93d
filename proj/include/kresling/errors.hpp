#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kresling {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Design-string syntax or range error. Carries the byte offset of the
/// offending token within the input text.
class DesignParseError : public Error {
public:
    DesignParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Calibration document violates the schema or a table invariant.
class CalibrationError : public Error {
public:
    using Error::Error;
};

/// Requested pressure lies outside the covered branch range (strict mode).
class ExtrapolationError : public CalibrationError {
public:
    using CalibrationError::CalibrationError;
};

/// File read/write failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace kresling
