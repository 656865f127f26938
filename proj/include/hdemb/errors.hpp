#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hdemb {

/// A precondition on an argument was violated (bad dimension, empty input...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An object is not in a state that allows the operation (empty memory,
/// binarizing an empty accumulator, class without samples...).
class InvalidState : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A numerical routine failed (non-SPD matrix, non-finite eigenvalue).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment configuration is malformed or inconsistent.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base for every data file problem.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary file problem at a known byte offset.
class FormatError : public DataError {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : DataError(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

class BadMagicError : public FormatError {
 public:
  using FormatError::FormatError;
};

class VersionMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

class TruncatedError : public FormatError {
 public:
  using FormatError::FormatError;
};

/// A label is outside {1..n_cl}.
class LabelError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace hdemb
