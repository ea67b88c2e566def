#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace repmix {

/// One study's effect estimate and its standard error, on an approximately
/// normal scale (standardized mean difference, log odds ratio, ...).
class StudySummary {
public:
    /// Throws ValidationError unless the estimate is finite and std_error is positive and finite.
    StudySummary(std::string label, double estimate, double std_error,
                 std::optional<std::string> scale = std::nullopt);

    const std::string& label() const noexcept { return label_; }
    double estimate() const noexcept { return estimate_; }
    double std_error() const noexcept { return std_error_; }
    double variance() const noexcept { return std_error_ * std_error_; }
    /// Free-text effect-size scale, passed through untouched.
    const std::optional<std::string>& scale() const noexcept { return scale_; }

    friend bool operator==(const StudySummary&, const StudySummary&) = default;

private:
    std::string label_;
    double estimate_;
    double std_error_;
    std::optional<std::string> scale_;
};

/// An original study plus m >= 1 replications with unique labels.
class ReplicationSet {
public:
    /// Throws ValidationError on an empty replication list or a duplicated label.
    ReplicationSet(StudySummary original, std::vector<StudySummary> replications);

    const StudySummary& original() const noexcept { return original_; }
    std::span<const StudySummary> replications() const noexcept { return replications_; }
    std::size_t size() const noexcept { return replications_.size(); }

    friend bool operator==(const ReplicationSet&, const ReplicationSet&) = default;

private:
    StudySummary original_;
    std::vector<StudySummary> replications_;
};

inline constexpr std::string_view kPooledLabel = "pooled";

/// Inverse-variance weighted mean and standard error sqrt(1 / sum 1/se^2).
/// The result is independent of input order. Throws DomainError on empty input.
StudySummary pool(std::span<const StudySummary> studies, std::string label = std::string(kPooledLabel));

/// Rounds estimate and standard error to `decimals` places, for reproducing
/// printed tables that were computed from rounded pooled values.
StudySummary round_summary(const StudySummary& study, int decimals);

enum class DatasetFormat { csv, json };

/// Picks the format from a file extension (".csv" / ".json", case-insensitive).
std::optional<DatasetFormat> format_from_path(std::string_view path);

/// CSV header `label,role,estimate,std_error[,scale]`, role one of
/// `original` / `replication`. JSON `{"original": {...}, "replications": [...]}`.
/// Throws ParseError naming the offending row and field.
ReplicationSet parse_dataset(std::string_view text, DatasetFormat format);
ReplicationSet parse_dataset(std::istream& in, DatasetFormat format);

std::string serialize_dataset(const ReplicationSet& data, DatasetFormat format);

}  // namespace repmix
