#pragma once

#include <stdexcept>
#include <string>

namespace hdg {

/// Invalid user input: bad parameters, malformed mesh files, unknown names.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-conforming or degenerate mesh data.
class MeshError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Failure inside a linear solve or factorization.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A diagonal block of the element operator could not be inverted.
class SingularBlockError : public NumericalError {
 public:
  SingularBlockError(int element, const std::string& what)
      : NumericalError(what), element_(element) {}
  int element() const { return element_; }

 private:
  int element_;
};

/// The condensed skeleton (Schur complement) system could not be factorized.
class SchurSolveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hdg
