// errors.hpp -- exception hierarchy shared by all hetseq modules.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hetseq {

// Root of all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration (bad K, alpha outside (0,1), ...). CLI exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Precondition violation on an operation argument (non-finite input,
// out-of-range fold label, dimension mismatch). CLI exit code 2.
class DomainError : public Error {
 public:
  using Error::Error;
};

// CSV ingestion failure. Row numbers are 1-based data rows (the header is
// row 0). column is the header name, empty when the failure is structural.
// CLI exit code 3.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::string column)
      : Error(what), row_(row), column_(std::move(column)) {}
  explicit ParseError(const std::string& what) : Error(what), row_(0) {}

  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

// A learner could not be fit on the given training set (e.g. an empty
// treatment arm). The pipeline converts this into a degenerate-fold event.
class FitError : public Error {
 public:
  using Error::Error;
};

// An evaluation fold on which the GATES statistic is undefined: some
// (group x arm) cell is empty or too small for the jackknife, or the
// contrast has zero variance. Carries the cell counts for diagnostics.
// CLI exit code 4.
class DegenerateFoldError : public Error {
 public:
  DegenerateFoldError(const std::string& what, std::size_t top_treated,
                      std::size_t top_control, std::size_t bottom_treated,
                      std::size_t bottom_control, int fold = 0)
      : Error(what),
        top_treated_(top_treated),
        top_control_(top_control),
        bottom_treated_(bottom_treated),
        bottom_control_(bottom_control),
        fold_(fold) {}

  std::size_t top_treated() const { return top_treated_; }
  std::size_t top_control() const { return top_control_; }
  std::size_t bottom_treated() const { return bottom_treated_; }
  std::size_t bottom_control() const { return bottom_control_; }

  // 1-based fold label, 0 when the failing fold is not known yet.
  int fold() const { return fold_; }
  void set_fold(int fold) { fold_ = fold; }

 private:
  std::size_t top_treated_, top_control_, bottom_treated_, bottom_control_;
  int fold_;
};

// A whole run could not produce a p-value (every fold degenerate, or a
// degenerate fold under the Error policy). CLI exit code 4.
class DegenerateRunError : public Error {
 public:
  using Error::Error;
};

}  // namespace hetseq
