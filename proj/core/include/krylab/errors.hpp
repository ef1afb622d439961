#pragma once

#include <stdexcept>
#include <string>

namespace krylab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad dimension, non-finite
/// entry, value out of range, ...).
class InvalidInputError : public Error {
public:
  using Error::Error;
};

/// An operation was requested in a state that cannot support it
/// (e.g. extending an Arnoldi decomposition past breakdown).
class InvalidStateError : public Error {
public:
  using Error::Error;
};

/// A matrix turned out singular to working precision where a solve was
/// required unconditionally.
class SingularMatrixError : public Error {
public:
  using Error::Error;
};

/// Malformed input text (Matrix Market files, CSV). Messages carry the
/// offending line number where known.
class ParseError : public Error {
public:
  using Error::Error;
};

/// Input declares a format this library deliberately does not handle.
class UnsupportedFormatError : public Error {
public:
  using Error::Error;
};

/// Experiment configuration problems; messages name the offending field.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Filesystem failures; messages carry the path.
class IoError : public Error {
public:
  using Error::Error;
};

} // namespace krylab
