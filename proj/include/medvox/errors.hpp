#pragma once

#include <stdexcept>
#include <string>

namespace medvox {

// Root of every error thrown by the engine.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Bad user configuration: pipeline JSON, CLI flags, parameter ranges.
class ConfigError : public Error {
  public:
    using Error::Error;
};

// Missing files, failed writes, unreadable inputs.
class IoError : public Error {
  public:
    using Error::Error;
};

enum class FormatErrc {
    BadMagic,
    UnsupportedVersion,
    UnsupportedDtype,
    Truncated,
    Malformed,
    CompressedNifti,
};

// A byte stream that does not decode (MVOL, MVLD, NIfTI).
class FormatError : public IoError {
  public:
    FormatError(FormatErrc code, const std::string &what) : IoError(what), code_(code) {}
    FormatErrc code() const noexcept { return code_; }

  private:
    FormatErrc code_;
};

// A transform rejected its input or parameters.
class TransformError : public Error {
  public:
    using Error::Error;
};

// The trace stack cannot be unwound.
class InversionError : public TransformError {
  public:
    using TransformError::TransformError;
};

} // namespace medvox
