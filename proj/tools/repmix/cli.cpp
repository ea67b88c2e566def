#include "cli.hpp"

#include <repmix/errors.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace repmix::cli {

namespace {

const std::vector<double> kDefaultCurveWeights = {0.0, 0.25, 0.5, 0.75, 1.0};

std::string fmt(const char* pattern, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, x);
    return buf;
}

// Up to `decimals` places with trailing zeros removed, for human tables.
std::string short_number(double x, int decimals = 4) {
    std::string s = fmt(("%." + std::to_string(decimals) + "f").c_str(), x);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

class TextTable {
public:
    explicit TextTable(std::vector<std::string> header) { rows_.push_back(std::move(header)); }

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    std::string str() const {
        std::vector<std::size_t> widths;
        for (const auto& row : rows_) {
            widths.resize(std::max(widths.size(), row.size()), 0);
            for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size() + 2);
        }
        std::string out;
        for (const auto& row : rows_) {
            std::string line;
            for (std::size_t i = 0; i < row.size(); ++i) line += pad(row[i], widths[i]);
            while (!line.empty() && line.back() == ' ') line.pop_back();
            out += line + "\n";
        }
        return out;
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string join_csv(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += csv_escape(fields[i]);
    }
    return line + "\n";
}

std::string num(double x) { return format_number(x); }

std::string render_region(const HpdiSet& region) {
    std::string s;
    for (std::size_t i = 0; i < region.intervals.size(); ++i) {
        if (i) s += " U ";
        s += "[" + short_number(region.intervals[i].lo) + ", " + short_number(region.intervals[i].hi) + "]";
    }
    return s;
}

const char* role_of(const AnalysisRow& row) { return row.pooled ? "pooled" : "replication"; }

Json row_header(const AnalysisRow& row) {
    Json j{{"label", row.study.label()},
           {"role", role_of(row)},
           {"estimate", row.study.estimate()},
           {"std_error", row.study.std_error()}};
    if (row.study.scale()) j["scale"] = *row.study.scale();
    return j;
}

Json document(const char* command, const AnalysisConfig& config, const ReplicationSet& data) {
    return Json{{"command", command},
                {"config", config.to_json()},
                {"original", to_json(data.original())},
                {"rows", Json::array()}};
}

// Posterior of theta for one row under the configured weight mode.
struct WeightedPosterior {
    double omega;  // prior weight actually used (E[w] in beta mode)
    TwoComponentNormalMixture posterior;
    Json weight;
    std::optional<WeightPosterior> weight_posterior;
};

WeightedPosterior posterior_for(const AnalysisConfig& config, const StudySummary& original,
                                const StudySummary& rep) {
    const auto vague = config.vague();
    switch (config.weight_mode) {
        case WeightMode::beta: {
            const BetaWeightPrior prior(config.eta, config.nu);
            return {prior.expected_weight(),
                    effect_marginal_posterior(rep, original, vague, prior),
                    Json{{"mode", "beta"},
                         {"eta", config.eta},
                         {"nu", config.nu},
                         {"expected_weight", prior.expected_weight()}},
                    weight_marginal_posterior(rep, original, vague, prior)};
        }
        case WeightMode::empirical_bayes: {
            const auto eb = empirical_bayes_weight(rep, original, vague);
            return {eb.omega_hat,
                    update_fixed(build_prior(original, vague, FixedWeight(eb.omega_hat)), rep),
                    Json{{"mode", "empirical_bayes"}, {"omega_hat", eb.omega_hat}, {"tie", eb.tie}},
                    std::nullopt};
        }
        case WeightMode::fixed:
            break;
    }
    return {config.omega, update_fixed(build_prior(original, vague, FixedWeight(config.omega)), rep),
            Json{{"mode", "fixed"}, {"omega", config.omega}}, std::nullopt};
}

std::pair<double, double> theta_range(const std::vector<TwoComponentNormalMixture>& curves,
                                      const GridOptions& grid) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& m : curves) {
        const auto [a, b] = m.support_span(8.0);
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    return {grid.theta_min.value_or(lo), grid.theta_max.value_or(hi)};
}

}  // namespace

void AnalysisConfig::validate() const {
    if (!std::isfinite(mu)) throw ValidationError("--mu must be finite");
    if (!(tau2 > 0.0) || !std::isfinite(tau2)) throw ValidationError("--tau2 must be positive and finite");
    if (!(omega >= 0.0 && omega <= 1.0)) throw ValidationError("--weight must lie in [0, 1]");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("--eta must be positive");
    if (!(nu > 0.0) || !std::isfinite(nu)) throw ValidationError("--nu must be positive");
    if (!(nu_dc > 0.0) || !std::isfinite(nu_dc)) throw ValidationError("--nu-dc must be positive");
    if (!(level > 0.0 && level < 1.0)) throw ValidationError("--level must lie in (0, 1)");
}

Json AnalysisConfig::to_json() const {
    Json weight;
    switch (weight_mode) {
        case WeightMode::fixed: weight = Json{{"mode", "fixed"}, {"omega", omega}}; break;
        case WeightMode::beta: weight = Json{{"mode", "beta"}, {"eta", eta}, {"nu", nu}}; break;
        case WeightMode::empirical_bayes: weight = Json{{"mode", "empirical_bayes"}}; break;
    }
    const char* pooling_text = pooling == Pooling::both ? "both" : (pooling == Pooling::pooled ? "pooled" : "per_replication");
    return Json{{"mu", mu},
                {"tau2", tau2},
                {"weight", std::move(weight)},
                {"nu_dc", nu_dc},
                {"level", level},
                {"pooling", pooling_text},
                {"round_pooled", round_pooled},
                {"force_interval", force_interval}};
}

std::vector<AnalysisRow> analysis_rows(const ReplicationSet& data, const AnalysisConfig& config) {
    std::vector<AnalysisRow> rows;
    if (config.pooling != Pooling::pooled) {
        for (const auto& rep : data.replications()) rows.push_back({rep, false});
    }
    if (config.pooling != Pooling::per_replication) {
        auto pooled = pool(data.replications());
        if (config.round_pooled) pooled = round_summary(pooled, 2);
        rows.push_back({std::move(pooled), true});
    }
    return rows;
}

std::string Report::render(OutputFormat format) const {
    switch (format) {
        case OutputFormat::json: return json.dump(2) + "\n";
        case OutputFormat::csv: return csv;
        case OutputFormat::table: break;
    }
    return table;
}

std::string to_string(GridTarget target) {
    switch (target) {
        case GridTarget::effect_posterior: return "effect_posterior";
        case GridTarget::weight_posterior: return "weight_posterior";
        case GridTarget::joint_posterior: return "joint_posterior";
    }
    return "unknown";
}

Report run_analyze(const AnalysisConfig& config, const ReplicationSet& data) {
    config.validate();
    Report report;
    report.json = document("analyze", config, data);
    TextTable table({"replication", "theta_r", "sigma_r", "omega", "omega'", "m1", "v1", "m2", "v2", "median",
                     "modes", "HPDI"});
    report.csv = join_csv({"label", "role", "estimate", "std_error", "omega", "omega_post", "m1", "v1", "m2", "v2",
                           "median", "mean", "modes", "level", "hpdi_lo_1", "hpdi_hi_1", "hpdi_lo_2", "hpdi_hi_2"});
    for (const auto& row : analysis_rows(data, config)) {
        const auto wp = posterior_for(config, data.original(), row.study);
        const auto& post = wp.posterior;
        const auto region = hpdi(post, config.level, {config.force_interval});
        if (region.forced_hull) {
            report.warnings.push_back("HPDI of '" + row.study.label() +
                                      "' is disjoint; reporting its convex hull as requested");
        }
        const double median = posterior_median(post);
        const int modes = mode_count(post);

        Json j = row_header(row);
        j["weight"] = wp.weight;
        j["posterior"] = to_json(post);
        j["median"] = median;
        j["mean"] = post.mean();
        j["mode_count"] = modes;
        j["hpdi"] = to_json(region);
        if (wp.weight_posterior) {
            const auto& w = *wp.weight_posterior;
            j["weight_posterior"] = Json{{"eta", w.eta()},
                                         {"nu", w.nu()},
                                         {"mean", w.mean()},
                                         {"log_predictive_consistent", w.log_predictive_consistent()},
                                         {"log_predictive_vague", w.log_predictive_vague()},
                                         {"log_normalizer", w.log_normalizer()}};
        }
        report.json["rows"].push_back(std::move(j));

        table.add({row.study.label(), short_number(row.study.estimate()), short_number(row.study.std_error()),
                   short_number(wp.omega), short_number(post.weight_informative()),
                   short_number(post.mean_informative()), fmt("%.6g", post.var_informative()),
                   short_number(post.mean_vague()), fmt("%.6g", post.var_vague()), short_number(median),
                   std::to_string(modes), render_region(region)});

        std::vector<std::string> fields = {row.study.label(), role_of(row), num(row.study.estimate()),
                                           num(row.study.std_error()), num(wp.omega),
                                           num(post.weight_informative()), num(post.mean_informative()),
                                           num(post.var_informative()), num(post.mean_vague()),
                                           num(post.var_vague()), num(median), num(post.mean()),
                                           std::to_string(modes), num(region.level)};
        for (std::size_t i = 0; i < 2; ++i) {
            const bool has = i < region.intervals.size();
            fields.push_back(has ? num(region.intervals[i].lo) : "");
            fields.push_back(has ? num(region.intervals[i].hi) : "");
        }
        report.csv += join_csv(fields);
    }
    report.table = "Posterior of the effect size (" + short_number(config.level * 100.0, 2) + "% HPDI)\n" +
                   table.str();
    return report;
}

Report run_bf(const AnalysisConfig& config, const ReplicationSet& data) {
    config.validate();
    const auto vague = config.vague();
    const BetaWeightPrior dc_prior(1.0, config.nu_dc);
    const BetaWeightPrior effect_prior(config.eta, config.nu);
    Report report;
    report.json = document("bf", config, data);
    report.json["config"]["eta"] = config.eta;
    report.json["config"]["nu"] = config.nu;

    const std::string dc_beta_name = "BF_dc(Beta(1, " + short_number(config.nu_dc) + "))";
    const std::string effect_name =
        "BF_01(Beta(" + short_number(config.eta) + ", " + short_number(config.nu) + "))";
    TextTable weight_table({"replication", "theta_r", "sigma_r", "BF_dc(omega = 0)", dc_beta_name});
    TextTable effect_table({"replication", "theta_r", "sigma_r", effect_name, "BF_01(omega = 1)"});
    report.csv = join_csv({"label", "role", "estimate", "std_error", "bf_dc_point", "bf_dc_point_formatted",
                           "bf_dc_beta", "bf_dc_beta_formatted", "bf_01_mixture", "bf_01_mixture_formatted",
                           "bf_01_replication", "bf_01_replication_formatted"});

    for (const auto& row : analysis_rows(data, config)) {
        const auto& rep = row.study;
        const auto dc_point = bf_dc_point(rep, data.original(), vague);
        const auto dc_beta = bf_dc_beta(rep, data.original(), vague, dc_prior);
        const auto effect_mix = bf_01_mixture(rep, data.original(), vague, effect_prior);
        const auto effect_rep = bf_01_replication(rep, data.original());

        Json j = row_header(row);
        j["bf_dc_point"] = to_json(dc_point);
        j["bf_dc_beta"] = to_json(dc_beta);
        j["bf_01_mixture"] = to_json(effect_mix);
        j["bf_01_replication"] = to_json(effect_rep);
        report.json["rows"].push_back(std::move(j));

        const std::string label = row.pooled ? "Pooled" : rep.label();
        weight_table.add({label, short_number(rep.estimate()), short_number(rep.std_error()), dc_point.formatted,
                          dc_beta.formatted});
        effect_table.add({label, short_number(rep.estimate()), short_number(rep.std_error()), effect_mix.formatted,
                          effect_rep.formatted});
        report.csv += join_csv({rep.label(), role_of(row), num(rep.estimate()), num(rep.std_error()),
                                num(dc_point.value), dc_point.formatted, num(dc_beta.value), dc_beta.formatted,
                                num(effect_mix.value), effect_mix.formatted, num(effect_rep.value),
                                effect_rep.formatted});
    }
    report.table = "Tests for the mixture weight (H_d vs H_c)\n" + weight_table.str() +
                   "\nTests for the effect size (H_0: theta = 0 vs H_1)\n" + effect_table.str();
    return report;
}

Report run_tipping(const AnalysisConfig& config, const ReplicationSet& data, const TippingConfig& tipping) {
    config.validate();
    if (!std::isfinite(tipping.threshold)) throw ValidationError("--threshold must be finite");
    Report report;
    report.json = document("tipping", config, data);
    report.json["config"]["threshold"] = tipping.threshold;
    TextTable table({"replication", "theta_r", "sigma_r", "omega*", "regime", "crossings"});
    report.csv = join_csv({"label", "role", "omega", "median", "excludes_threshold", "level", "hpdi_lo_1",
                           "hpdi_hi_1", "hpdi_lo_2", "hpdi_hi_2"});

    TippingOptions options;
    options.level = config.level;
    options.threshold = tipping.threshold;
    for (const auto& row : analysis_rows(data, config)) {
        const auto result = tipping_point(data.original(), row.study, config.vague(), options);
        Json j = row_header(row);
        j["tipping"] = to_json(result);
        report.json["rows"].push_back(std::move(j));

        std::string crossings;
        for (double c : result.crossings) crossings += (crossings.empty() ? "" : " ") + short_number(c);
        table.add({row.study.label(), short_number(row.study.estimate()), short_number(row.study.std_error()),
                   result.omega_star ? short_number(*result.omega_star) : "none", to_string(result.regime),
                   crossings.empty() ? "-" : crossings});
        if (!result.monotone) {
            report.warnings.push_back("exclusion of the threshold is not monotone in omega for '" +
                                      row.study.label() + "'; all crossings are reported");
        }
        for (const auto& point : result.trace) {
            std::vector<std::string> fields = {row.study.label(), role_of(row), num(point.omega),
                                               num(point.median), point.excludes_threshold ? "true" : "false",
                                               num(point.region.level)};
            for (std::size_t i = 0; i < 2; ++i) {
                const bool has = i < point.region.intervals.size();
                fields.push_back(has ? num(point.region.intervals[i].lo) : "");
                fields.push_back(has ? num(point.region.intervals[i].hi) : "");
            }
            report.csv += join_csv(fields);
        }
    }
    report.table = "Tipping point: smallest omega whose " + short_number(config.level * 100.0, 2) +
                   "% HPDI excludes " + short_number(tipping.threshold) + "\n" + table.str();
    return report;
}

Report run_grid(const AnalysisConfig& config, const ReplicationSet& data, const GridOptions& grid) {
    config.validate();
    if (grid.theta_points < 2) throw ValidationError("--points must be at least 2");
    if (grid.weight_points < 2) throw ValidationError("--weight-points must be at least 2");
    for (double w : grid.weights) {
        if (!(w >= 0.0 && w <= 1.0)) throw ValidationError("--weights entries must lie in [0, 1]");
    }
    if (grid.theta_min && grid.theta_max && !(*grid.theta_min < *grid.theta_max))
        throw ValidationError("--theta-min must be below --theta-max");

    const auto vague = config.vague();
    Report report;
    report.json = document("grid", config, data);
    report.json["target"] = to_string(grid.target);
    const auto rows = analysis_rows(data, config);

    auto metadata = [&](const AnalysisRow& row, const std::string& weight_text) {
        return std::map<std::string, std::string>{{"original", data.original().label()},
                                                  {"replication", row.study.label()},
                                                  {"mu", num(config.mu)},
                                                  {"tau2", num(config.tau2)},
                                                  {"weight", weight_text}};
    };

    if (grid.target == GridTarget::effect_posterior) {
        report.csv = join_csv({"label", "curve", "theta", "density"});
        for (const auto& row : rows) {
            std::vector<std::pair<std::string, TwoComponentNormalMixture>> curves;
            if (config.weight_mode == WeightMode::fixed && !grid.weights.empty()) {
                for (double w : grid.weights)
                    curves.emplace_back("omega=" + num(w),
                                        update_fixed(build_prior(data.original(), vague, FixedWeight(w)), row.study));
            } else if (config.weight_mode == WeightMode::fixed) {
                for (double w : kDefaultCurveWeights)
                    curves.emplace_back("omega=" + num(w),
                                        update_fixed(build_prior(data.original(), vague, FixedWeight(w)), row.study));
            } else {
                auto wp = posterior_for(config, data.original(), row.study);
                const std::string name = config.weight_mode == WeightMode::beta
                                             ? "Beta(" + num(config.eta) + "," + num(config.nu) + ")"
                                             : "omega_hat=" + num(wp.omega);
                curves.emplace_back(name, std::move(wp.posterior));
            }
            std::vector<TwoComponentNormalMixture> mixtures;
            for (const auto& c : curves) mixtures.push_back(c.second);
            const auto [lo, hi] = theta_range(mixtures, grid);
            if (!(lo < hi)) throw ValidationError("--theta-min must be below --theta-max");

            Json j = row_header(row);
            j["curves"] = Json::array();
            for (const auto& [name, mixture] : curves) {
                const auto g = density_grid(mixture, lo, hi, grid.theta_points, metadata(row, name));
                j["curves"].push_back(Json{{"curve", name}, {"posterior", to_json(mixture)}, {"grid", to_json(g)}});
                for (const auto& [x, d] : g.points)
                    report.csv += join_csv({row.study.label(), name, num(x), num(d)});
            }
            report.json["rows"].push_back(std::move(j));
        }
    } else if (grid.target == GridTarget::weight_posterior) {
        const BetaWeightPrior prior(config.eta, config.nu);
        report.csv = join_csv({"label", "omega", "density"});
        for (const auto& row : rows) {
            const auto wp = weight_marginal_posterior(row.study, data.original(), vague, prior);
            Json omega = Json::array();
            Json density = Json::array();
            for (int i = 0; i < grid.weight_points; ++i) {
                const double w = i == grid.weight_points - 1 ? 1.0 : static_cast<double>(i) / (grid.weight_points - 1);
                const double d = wp.density(w);
                omega.push_back(w);
                density.push_back(std::isfinite(d) ? Json(d) : Json(nullptr));
                report.csv += join_csv({row.study.label(), num(w), num(d)});
            }
            Json j = row_header(row);
            j["prior"] = Json{{"eta", prior.eta()}, {"nu", prior.nu()}};
            j["posterior_mean"] = wp.mean();
            j["omega"] = std::move(omega);
            j["density"] = std::move(density);
            report.json["rows"].push_back(std::move(j));
        }
    } else {
        const BetaWeightPrior prior(config.eta, config.nu);
        report.csv = join_csv({"label", "theta", "omega", "density"});
        for (const auto& row : rows) {
            const auto marginal = effect_marginal_posterior(row.study, data.original(), vague, prior);
            const auto [lo, hi] = theta_range({marginal}, grid);
            if (!(lo < hi)) throw ValidationError("--theta-min must be below --theta-max");
            Json theta = Json::array();
            Json omega = Json::array();
            Json density = Json::array();
            for (int i = 0; i < grid.theta_points; ++i) {
                theta.push_back(i == grid.theta_points - 1 ? hi : lo + (hi - lo) * i / (grid.theta_points - 1));
            }
            for (int k = 0; k < grid.weight_points; ++k) {
                omega.push_back(k == grid.weight_points - 1 ? 1.0 : static_cast<double>(k) / (grid.weight_points - 1));
            }
            for (const auto& t : theta) {
                Json line = Json::array();
                for (const auto& w : omega) {
                    const double d = joint_posterior_density(t.get<double>(), w.get<double>(), row.study,
                                                             data.original(), vague, prior);
                    line.push_back(std::isfinite(d) ? Json(d) : Json(nullptr));
                    report.csv += join_csv({row.study.label(), num(t.get<double>()), num(w.get<double>()), num(d)});
                }
                density.push_back(std::move(line));
            }
            Json j = row_header(row);
            j["prior"] = Json{{"eta", prior.eta()}, {"nu", prior.nu()}};
            j["theta"] = std::move(theta);
            j["omega"] = std::move(omega);
            j["density"] = std::move(density);
            report.json["rows"].push_back(std::move(j));
        }
    }
    report.table = report.csv;
    return report;
}

namespace {

struct CommandLine {
    std::string dataset;
    std::string input_format;
    std::optional<double> mu;
    std::optional<double> tau2;
    std::optional<double> eta;
    std::optional<double> nu;
    std::string weight;
    double nu_dc = 2.0;
    double level = 0.95;
    bool pooled = false;
    bool per_rep = false;
    bool both = false;
    bool round_pooled = false;
    bool force_interval = false;
    std::string format = "table";
    std::string out;
    double threshold = 0.0;
    std::string target = "effect_posterior";
    std::vector<double> weights;
    std::optional<double> theta_min;
    std::optional<double> theta_max;
    int points = 201;
    int weight_points = 101;
};

void add_common_options(CLI::App* cmd, CommandLine& cl) {
    cmd->add_option("dataset", cl.dataset, "Dataset file (.csv or .json), or - for standard input")->required();
    cmd->add_option("--input-format", cl.input_format, "Dataset format when it cannot be inferred (csv, json)")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--mu", cl.mu, "Mean of the vague component (default 0)");
    cmd->add_option("--tau2", cl.tau2, "Variance of the vague component (default 2, or $REPMIX_DEFAULT_TAU2)");
    cmd->add_option("--weight", cl.weight, "Fixed prior weight in [0, 1], or 'eb' for the empirical Bayes weight");
    cmd->add_option("--eta", cl.eta, "First Beta shape of the weight prior");
    cmd->add_option("--nu", cl.nu, "Second Beta shape of the weight prior");
    cmd->add_option("--nu-dc", cl.nu_dc, "Second shape of the Beta(1, nu) alternative in the weight test");
    cmd->add_option("--level", cl.level, "Credibility level of HPD intervals");
    auto* pooled = cmd->add_flag("--pooled", cl.pooled, "Analyse only the pooled replications");
    auto* per_rep = cmd->add_flag("--per-rep", cl.per_rep, "Analyse each replication separately");
    auto* both = cmd->add_flag("--both", cl.both, "Per-replication rows followed by the pooled row (default)");
    pooled->excludes(per_rep)->excludes(both);
    per_rep->excludes(both);
    cmd->add_flag("--round-pooled", cl.round_pooled, "Round pooled estimate and standard error to 2 decimals");
    cmd->add_flag("--force-interval", cl.force_interval, "Report the convex hull of a disjoint HPD region");
    cmd->add_option("--format", cl.format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
    cmd->add_option("--out", cl.out, "Write output to this file instead of standard output");
}

double parse_env_tau2(const char* text) {
    char* end = nullptr;
    const double value = std::strtod(text, &end);
    if (end == text || *end != '\0') throw ValidationError(std::string(kTau2EnvVar) + " is not a number");
    return value;
}

AnalysisConfig make_config(const CommandLine& cl) {
    AnalysisConfig config;
    if (cl.mu) config.mu = *cl.mu;
    if (cl.tau2) {
        config.tau2 = *cl.tau2;
    } else if (const char* env = std::getenv(kTau2EnvVar); env && *env) {
        config.tau2 = parse_env_tau2(env);
    }
    if (cl.eta) config.eta = *cl.eta;
    if (cl.nu) config.nu = *cl.nu;
    if (!cl.weight.empty()) {
        if (cl.eta || cl.nu) throw ValidationError("--weight cannot be combined with --eta/--nu");
        if (cl.weight == "eb" || cl.weight == "empirical-bayes") {
            config.weight_mode = WeightMode::empirical_bayes;
        } else {
            char* end = nullptr;
            config.omega = std::strtod(cl.weight.c_str(), &end);
            if (end == cl.weight.c_str() || *end != '\0')
                throw ValidationError("--weight must be a number in [0, 1] or 'eb'");
            config.weight_mode = WeightMode::fixed;
        }
    } else if (cl.eta || cl.nu) {
        config.weight_mode = WeightMode::beta;
    }
    config.nu_dc = cl.nu_dc;
    config.level = cl.level;
    config.pooling = cl.pooled ? Pooling::pooled : (cl.per_rep ? Pooling::per_replication : Pooling::both);
    config.round_pooled = cl.round_pooled;
    config.force_interval = cl.force_interval;
    config.format = cl.format == "json" ? OutputFormat::json : (cl.format == "csv" ? OutputFormat::csv : OutputFormat::table);
    config.validate();
    return config;
}

ReplicationSet load_dataset(const CommandLine& cl, std::istream& in) {
    std::optional<DatasetFormat> format;
    if (!cl.input_format.empty()) format = cl.input_format == "json" ? DatasetFormat::json : DatasetFormat::csv;
    if (cl.dataset == "-") return parse_dataset(in, format.value_or(DatasetFormat::csv));
    if (!format) format = format_from_path(cl.dataset);
    if (!format) throw ValidationError("cannot infer dataset format of '" + cl.dataset + "'; use --input-format");
    std::ifstream file(cl.dataset, std::ios::binary);
    if (!file) throw ValidationError("cannot open dataset '" + cl.dataset + "'");
    return parse_dataset(file, *format);
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"repmix: replication success with mixture priors", "repmix"};
    app.require_subcommand(1);
    CommandLine cl;

    auto* analyze = app.add_subcommand("analyze", "Posterior of the effect size: mixture components, median, HPDI");
    auto* bf = app.add_subcommand("bf", "Bayes factors for the mixture weight and for the effect size");
    auto* tipping = app.add_subcommand("tipping", "Smallest prior weight whose HPDI excludes a threshold");
    auto* grid = app.add_subcommand("grid", "Density grids of effect, weight or joint posteriors");
    for (auto* cmd : {analyze, bf, tipping, grid}) add_common_options(cmd, cl);
    tipping->add_option("--threshold", cl.threshold, "Effect size the HPDI must exclude (default 0)");
    grid->add_option("--target", cl.target, "Posterior to tabulate")
        ->check(CLI::IsMember({"effect_posterior", "weight_posterior", "joint_posterior"}));
    grid->add_option("--weights", cl.weights, "Fixed weights for effect-posterior curves")->delimiter(',');
    grid->add_option("--theta-min", cl.theta_min, "Lower end of the effect-size grid");
    grid->add_option("--theta-max", cl.theta_max, "Upper end of the effect-size grid");
    grid->add_option("--points", cl.points, "Number of effect-size grid points");
    grid->add_option("--weight-points", cl.weight_points, "Number of weight grid points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        const auto config = make_config(cl);
        const auto data = load_dataset(cl, in);
        Report report;
        if (analyze->parsed()) {
            report = run_analyze(config, data);
        } else if (bf->parsed()) {
            report = run_bf(config, data);
        } else if (tipping->parsed()) {
            report = run_tipping(config, data, TippingConfig{cl.threshold});
        } else {
            GridOptions options;
            options.target = cl.target == "weight_posterior"  ? GridTarget::weight_posterior
                             : cl.target == "joint_posterior" ? GridTarget::joint_posterior
                                                              : GridTarget::effect_posterior;
            options.weights = cl.weights;
            options.theta_min = cl.theta_min;
            options.theta_max = cl.theta_max;
            options.theta_points = cl.points;
            options.weight_points = cl.weight_points;
            report = run_grid(config, data, options);
        }
        for (const auto& w : report.warnings) err << "warning: " << w << "\n";
        const std::string text = report.render(config.format);
        if (cl.out.empty()) {
            out << text;
        } else {
            std::ofstream file(cl.out, std::ios::binary);
            if (!file) throw ValidationError("cannot write to '" + cl.out + "'");
            file << text;
        }
        return kExitOk;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace repmix::cli
