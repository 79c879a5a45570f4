#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace medfaith {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration: unknown profile, language mismatch, bad values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// One problem found while reading a record-oriented input file.
struct RecordDiagnostic {
  std::size_t line = 0;  // 1-based; 0 when not tied to a line
  std::string id;        // record id when known
  std::string message;
};

/// Raised when an input file contains one or more bad records. Carries every
/// diagnostic found, not just the first.
class InputError : public Error {
 public:
  InputError(std::string path, std::vector<RecordDiagnostic> diagnostics);

  const std::string& path() const noexcept { return path_; }
  const std::vector<RecordDiagnostic>& diagnostics() const noexcept {
    return diagnostics_;
  }

 private:
  std::string path_;
  std::vector<RecordDiagnostic> diagnostics_;
};

/// Numeric precondition failures in the loss kernels.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace medfaith
