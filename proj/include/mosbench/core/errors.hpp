#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mosbench {

/// Base of every error thrown by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or unreadable input data. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Malformed field in a tabular or JSON input.
class ParseError : public InputError {
 public:
  ParseError(std::string source, std::size_t line, std::string field, const std::string& what)
      : InputError(source + ":" + std::to_string(line) + ": field '" + field + "': " + what),
        source_(std::move(source)),
        line_(line),
        field_(std::move(field)) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string source_;
  std::size_t line_;
  std::string field_;
};

/// Header or schema_version does not match what this build reads.
class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

/// A computation was asked for outside its domain (too few samples, zero variance, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A configuration that cannot be satisfied (too few subjects, patch larger than frame, ...).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace mosbench
