#pragma once

#include <stdexcept>
#include <string>

namespace cdual {

/// Base of every error raised by the library. Each subclass maps to one
/// failure category of the public contract; the CLI maps categories to exit
/// codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed tree description (cycle, two parents, disconnected vertex).
class StructuralError : public Error {
 public:
  StructuralError(const std::string& what, std::string vertex)
      : Error(what), vertex_(std::move(vertex)) {}
  const std::string& vertex() const noexcept { return vertex_; }

 private:
  std::string vertex_;
};

/// A depth, order or index lies outside the materialized range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Tree and weight specification do not fit together.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// The operator is not in the class a routine requires.
class ClassificationError : public Error {
 public:
  using Error::Error;
};

class NotLeftInvertibleError : public Error {
 public:
  NotLeftInvertibleError(const std::string& what, std::string witness)
      : Error(what), witness_(std::move(witness)) {}
  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

/// Invariant tuples computed to different depths.
class ComparisonError : public Error {
 public:
  using Error::Error;
};

/// JSON input violates the run-spec schema. `path()` is a JSON pointer.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string path)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace cdual
