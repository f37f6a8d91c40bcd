#pragma once

#include <stdexcept>
#include <string>

namespace seizureml {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent input data (CSV layout, label range, shape mismatches).
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(what) {}
};

/// Invalid configuration (bad fractions, unknown model kinds, unusable hyperparameters).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Filesystem problems (missing input file, unwritable output directory).
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

/// Numerical failure during training (divergent loss, non-finite scores).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

}  // namespace seizureml
