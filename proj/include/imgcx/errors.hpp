#pragma once

#include <stdexcept>
#include <string>

namespace imgcx {

/// Malformed or out-of-contract input data (bad raster, too small, unreadable).
class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter outside its admissible range.
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A quantity that is mathematically undefined for the given data
/// (zero variance, constant vector). Callers record it as a missing value.
class UndefinedValue : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Dataset / manifest problems, carrying the offending row when known.
class DataError : public std::runtime_error {
public:
    DataError(const std::string& what, long row = -1)
        : std::runtime_error(row >= 0 ? "row " + std::to_string(row) + ": " + what : what),
          row_(row) {}
    long row() const noexcept { return row_; }

private:
    long row_;
};

}  // namespace imgcx
