#pragma once

#include <stdexcept>
#include <string>

namespace dk {

// Error classes map to CLI exit codes: InputError/ConfigError -> 1,
// NumericalError -> 2.

enum class ErrorCode {
  Generic,
  BadMagic,
  BadVersion,
  TruncatedPayload,
  DuplicateId,
  IdMismatch,
  ShapeMismatch,
  NonFinite,
  MissingFile,
  ParseError,
};

class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg, ErrorCode code = ErrorCode::Generic)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg, long iterations = -1)
      : std::runtime_error(msg), iterations_(iterations) {}
  long iterations() const { return iterations_; }

 private:
  long iterations_;
};

}  // namespace dk
