#pragma once

#include <stdexcept>
#include <string>

namespace sifdecay {

// Base class for every failure the library raises on purpose.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Profile parameters outside the admissible range (omega not in (0,1), ...).
class InvalidProfileError : public Error {
public:
  using Error::Error;
};

// Malformed documents: wrong JSON types, unknown keys, missing fields,
// internally inconsistent model files.
class SchemaError : public Error {
public:
  using Error::Error;
};

// Arguments outside an operation's domain (r >= 1, t <= 0, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// The generalized Cantor construction cannot proceed (length underflow, ...).
class ConstructionError : public Error {
public:
  using Error::Error;
};

// Mass calibration did not stabilize across the scanned scales.
class CalibrationError : public Error {
public:
  using Error::Error;
};

// Requested tolerance is unreachable at the materialized depth.  The carried
// depth is a conservative estimate of how deep the model would need to be.
class PrecisionError : public Error {
public:
  PrecisionError(const std::string& what, int required_depth)
      : Error(what), required_depth(required_depth) {}
  int required_depth;
};

}  // namespace sifdecay
