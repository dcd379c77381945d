// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace citeaccel {

// Base of every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Measure evaluated outside its admissible range (t too small, N(t) = 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Per-paper data requested from an aggregate-only record, or vice versa.
class GranularityError : public Error {
 public:
  using Error::Error;
};

// Invalid free parameter (gamma, delta, k) or model parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Input data that cannot be used: empty records, malformed rows, bad files.
class DataError : public Error {
 public:
  using Error::Error;
};

// Canonical dataset document violates the schema. `path` names the field.
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& what)
      : Error(path + ": " + what), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace citeaccel
