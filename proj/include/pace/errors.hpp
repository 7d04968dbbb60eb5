#pragma once

#include <stdexcept>
#include <string>

namespace pace {

// Base for every error raised by the library. Callers that only need a
// message can catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Input outside its documented range or a structurally invalid object.
class ValidationError : public Error {
  public:
    using Error::Error;
};

// A parameter that configures a computation (p_max, kappa, ...) is invalid.
class ConfigError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

// An identifier (state id, policy name) does not resolve.
class LookupError : public Error {
  public:
    using Error::Error;
};

// The request is well formed but outside what an operation supports,
// e.g. asking the exact oracle for a noisy environment.
class UnsupportedConfigError : public Error {
  public:
    using Error::Error;
};

// Filesystem failures: unreadable scenario, unwritable output directory.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace pace
