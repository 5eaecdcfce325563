#pragma once

#include <stdexcept>
#include <string>

namespace vennabers {

// Base class for every error raised by the library. The subclasses map onto
// the CLI exit codes (usage 2, data 3, degenerate model 4).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration supplied by the caller.
class UsageError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent input data.
class DataError : public Error {
public:
    using Error::Error;
};

// The data is well formed but cannot support the requested model,
// e.g. a calibration fold that contains a single class.
class DegenerateError : public Error {
public:
    using Error::Error;
};

}  // namespace vennabers
