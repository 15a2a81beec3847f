#ifndef PIR_ERRORS_HPP
#define PIR_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pir {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the function (p = 1.5, rho^2 < 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Vector or matrix sizes do not line up.
class DimensionError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

/// The outcome has zero variance, so no ratio of spreads is defined.
class DegenerateDataError : public Error {
public:
    using Error::Error;
};

/// The design matrix is rank deficient. `column()` is the index in the
/// design matrix (0 is the intercept).
class SingularDesignError : public Error {
public:
    SingularDesignError(std::size_t column, const std::string& name)
        : Error("singular design: column " + std::to_string(column) + " ('" + name +
                "') is linearly dependent on the preceding columns"),
          column_(column),
          name_(name) {}

    std::size_t column() const noexcept { return column_; }
    const std::string& column_name() const noexcept { return name_; }

private:
    std::size_t column_;
    std::string name_;
};

/// Problems reading input files: missing file, missing column, empty file.
class IngestionError : public Error {
public:
    using Error::Error;
};

/// A cell could not be parsed as a finite number. Rows are 1-based data rows
/// (the header is not counted); columns are 1-based field positions.
class ParseError : public IngestionError {
public:
    ParseError(std::size_t row, std::size_t column, const std::string& what)
        : IngestionError("parse error at row " + std::to_string(row) + ", column " +
                         std::to_string(column) + ": " + what),
          row_(row),
          column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace pir

#endif  // PIR_ERRORS_HPP
