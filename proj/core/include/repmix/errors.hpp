#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace repmix {

/// Argument outside the mathematical domain of an operation
/// (non-positive variance, empty input, non-bracketing interval, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A value violates the invariants of a domain type.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative routine did not reach its tolerance within its budget.
/// Carries the best estimate seen so far.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double best_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

/// Dataset could not be decoded. `row` is 1-based (header is row 1 for CSV,
/// for JSON it is the 1-based position among the studies with the original first).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::optional<std::size_t> row = std::nullopt,
               std::string field = {})
        : std::runtime_error(format(what, row, field)), row_(row), field_(std::move(field)) {}

    std::optional<std::size_t> row() const noexcept { return row_; }
    const std::string& field() const noexcept { return field_; }

private:
    static std::string format(const std::string& what, std::optional<std::size_t> row,
                              const std::string& field) {
        std::string msg = what;
        if (row) msg += " (row " + std::to_string(*row);
        if (!field.empty()) msg += (row ? ", field '" : " (field '") + field + "'";
        if (row || !field.empty()) msg += ")";
        return msg;
    }

    std::optional<std::size_t> row_;
    std::string field_;
};

}  // namespace repmix
