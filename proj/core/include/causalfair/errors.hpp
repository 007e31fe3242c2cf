#pragma once

#include <stdexcept>
#include <string>

namespace causalfair {

// Base for all library errors. `code()` is a stable machine-readable
// identifier; `what()` carries the human-readable context.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// A PDAG admits no DAG extension (Dor-Tarsi sink search exhausted).
class NotExtendableError : public Error {
 public:
  explicit NotExtendableError(const std::string& msg)
      : Error("not_extendable", msg) {}
};

// An enumeration exceeded its configured cap. `found` is the number of
// results produced before giving up.
class LimitExceededError : public Error {
 public:
  LimitExceededError(const std::string& msg, std::size_t found)
      : Error("limit_exceeded", msg), found_(found) {}
  std::size_t found() const noexcept { return found_; }

 private:
  std::size_t found_;
};

// A graph has no consistent DAG extension at all (conflicting or
// bidirected input), so class-wide quantities are undefined.
class EmptyClassError : public Error {
 public:
  explicit EmptyClassError(const std::string& msg)
      : Error("empty_class", msg) {}
};

// Correlation submatrix was not invertible (collinear inputs).
class SingularCovarianceError : public Error {
 public:
  explicit SingularCovarianceError(const std::string& msg)
      : Error("singular_covariance", msg) {}
};

// Regression design matrix is rank deficient.
class SingularDesignError : public Error {
 public:
  explicit SingularDesignError(const std::string& msg)
      : Error("singular_design", msg) {}
};

// A column whose variance must be positive is constant.
class ZeroVarianceError : public Error {
 public:
  explicit ZeroVarianceError(const std::string& msg)
      : Error("zero_variance", msg) {}
};

// Too few rows for the requested statistic.
class InsufficientSamplesError : public Error {
 public:
  explicit InsufficientSamplesError(const std::string& msg)
      : Error("insufficient_samples", msg) {}
};

// An operation requiring one column family saw both.
class MixedFamilyError : public Error {
 public:
  explicit MixedFamilyError(const std::string& msg)
      : Error("mixed_family", msg) {}
};

// Input file disagrees with the schema (unknown column, bad kind, ...).
class SchemaMismatchError : public Error {
 public:
  explicit SchemaMismatchError(const std::string& msg)
      : Error("schema_mismatch", msg) {}
};

// A cell in the data file is empty or unparseable.
class MissingValueError : public Error {
 public:
  MissingValueError(const std::string& msg, std::size_t row, std::size_t col)
      : Error("missing_value", msg), row_(row), col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

// Zero data rows.
class EmptyDatasetError : public Error {
 public:
  explicit EmptyDatasetError(const std::string& msg)
      : Error("empty_dataset", msg) {}
};

// A group probability was requested for a group with no rows.
class EmptyGroupError : public Error {
 public:
  explicit EmptyGroupError(const std::string& msg)
      : Error("empty_group", msg) {}
};

// The requested algorithm cannot run on this dataset's column families.
class NotApplicableError : public Error {
 public:
  explicit NotApplicableError(const std::string& msg)
      : Error("not_applicable", msg) {}
};

// Malformed invocation of the public API (bad index, duplicate name, ...).
class InvalidArgumentError : public Error {
 public:
  explicit InvalidArgumentError(const std::string& msg)
      : Error("invalid_argument", msg) {}
};

}  // namespace causalfair
