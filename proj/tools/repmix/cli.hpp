#pragma once

#include <repmix/json_io.hpp>
#include <repmix/study_data.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace repmix::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

/// Environment variable that overrides the default vague-component variance.
inline constexpr const char* kTau2EnvVar = "REPMIX_DEFAULT_TAU2";

enum class WeightMode { fixed, beta, empirical_bayes };
enum class Pooling { per_replication, pooled, both };
enum class OutputFormat { table, csv, json };
enum class GridTarget { effect_posterior, weight_posterior, joint_posterior };

struct AnalysisConfig {
    double mu = VagueComponent::kDefaultMean;
    double tau2 = VagueComponent::kDefaultVariance;
    WeightMode weight_mode = WeightMode::fixed;
    double omega = 0.5;
    double eta = 1.0;
    double nu = 1.0;
    /// Second shape of the Beta(1, nu) alternative in the weight test.
    double nu_dc = 2.0;
    double level = 0.95;
    Pooling pooling = Pooling::both;
    bool round_pooled = false;
    bool force_interval = false;
    OutputFormat format = OutputFormat::table;

    /// Throws ValidationError naming the offending field.
    void validate() const;
    VagueComponent vague() const { return VagueComponent(mu, tau2); }
    Json to_json() const;
};

struct GridOptions {
    GridTarget target = GridTarget::effect_posterior;
    /// Fixed weights for effect-posterior curves; empty means the default set.
    std::vector<double> weights;
    std::optional<double> theta_min;
    std::optional<double> theta_max;
    int theta_points = 201;
    int weight_points = 101;
};

struct TippingConfig {
    double threshold = 0.0;
};

/// A replication (or the pooled replications) to analyse against the original.
struct AnalysisRow {
    StudySummary study;
    bool pooled;
};

/// Input order, pooled row last when requested. Pooled values are rounded
/// to two decimals when config.round_pooled is set.
std::vector<AnalysisRow> analysis_rows(const ReplicationSet& data, const AnalysisConfig& config);

/// One command's output, renderable in every format.
struct Report {
    Json json;
    std::string table;
    std::string csv;
    std::vector<std::string> warnings;

    std::string render(OutputFormat format) const;
};

Report run_analyze(const AnalysisConfig& config, const ReplicationSet& data);
Report run_bf(const AnalysisConfig& config, const ReplicationSet& data);
Report run_tipping(const AnalysisConfig& config, const ReplicationSet& data, const TippingConfig& tipping = {});
Report run_grid(const AnalysisConfig& config, const ReplicationSet& data, const GridOptions& grid = {});

std::string to_string(GridTarget target);

/// Full command-line entry point. Returns the process exit code: 0 on
/// success, 2 on invalid input or arguments, 3 on numeric non-convergence.
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace repmix::cli
