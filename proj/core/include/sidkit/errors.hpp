#pragma once

#include <stdexcept>
#include <string>

namespace sidkit {

// Coarse error classes. The CLI maps these onto exit codes:
// Input -> 2, Numeric -> 3, Io -> 4.
enum class ErrorClass { Input, Numeric, Io };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what)
      : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

/// Malformed file header or record; the message names the offending field.
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what)
      : Error(ErrorClass::Input, "format error: " + what) {}
};

/// Non-finite value in a cloud.
class DataError : public Error {
 public:
  DataError(const std::string& what, long row, long col)
      : Error(ErrorClass::Input, "data error: " + what + " at row " +
                                     std::to_string(row) + ", column " +
                                     std::to_string(col)),
        row_(row),
        col_(col) {}
  long row() const noexcept { return row_; }
  long col() const noexcept { return col_; }

 private:
  long row_;
  long col_;
};

class EmptyCloudError : public Error {
 public:
  explicit EmptyCloudError(const std::string& what)
      : Error(ErrorClass::Input, "empty cloud: " + what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what)
      : Error(ErrorClass::Io, "I/O error: " + what) {}
};

/// Dimension mismatch between inputs.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what)
      : Error(ErrorClass::Input, "shape error: " + what) {}
};

class InsufficientSamplesError : public Error {
 public:
  explicit InsufficientSamplesError(const std::string& what)
      : Error(ErrorClass::Input, "insufficient samples: " + what) {}
};

class UnsupportedModeError : public Error {
 public:
  explicit UnsupportedModeError(const std::string& what)
      : Error(ErrorClass::Input, "unsupported mode: " + what) {}
};

/// Invalid argument (bad configuration values, empty ranges, ...).
class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what)
      : Error(ErrorClass::Input, "invalid argument: " + what) {}
};

class LookupError : public Error {
 public:
  explicit LookupError(const std::string& what)
      : Error(ErrorClass::Input, "lookup error: " + what) {}
};

class EmptyRankingError : public Error {
 public:
  explicit EmptyRankingError(const std::string& what)
      : Error(ErrorClass::Input, "empty ranking: " + what) {}
};

/// Eigensolver failure, non-PSD matrix, failed decomposition.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what)
      : Error(ErrorClass::Numeric, "numeric error: " + what) {}
};

class DegenerateTargetError : public Error {
 public:
  explicit DegenerateTargetError(const std::string& what)
      : Error(ErrorClass::Numeric, "degenerate target: " + what) {}
};

/// Kernel accumulation left the representable double range.
class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, double exponent_magnitude)
      : Error(ErrorClass::Numeric,
              "overflow: " + what + " (|p| = " +
                  std::to_string(exponent_magnitude) + ")"),
        exponent_magnitude_(exponent_magnitude) {}
  double exponent_magnitude() const noexcept { return exponent_magnitude_; }

 private:
  double exponent_magnitude_;
};

}  // namespace sidkit
