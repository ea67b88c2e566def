#include "repmix/study_data.hpp"

#include "repmix/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <iterator>
#include <set>
#include <sstream>

namespace repmix {

StudySummary::StudySummary(std::string label, double estimate, double std_error,
                           std::optional<std::string> scale)
    : label_(std::move(label)), estimate_(estimate), std_error_(std_error), scale_(std::move(scale)) {
    if (!std::isfinite(estimate_)) throw ValidationError("estimate of '" + label_ + "' must be finite");
    if (!(std_error_ > 0.0) || !std::isfinite(std_error_))
        throw ValidationError("std_error of '" + label_ + "' must be positive and finite");
}

ReplicationSet::ReplicationSet(StudySummary original, std::vector<StudySummary> replications)
    : original_(std::move(original)), replications_(std::move(replications)) {
    if (replications_.empty()) throw ValidationError("no replications");
    std::set<std::string> labels{original_.label()};
    for (const auto& rep : replications_) {
        if (!labels.insert(rep.label()).second) throw ValidationError("duplicate label '" + rep.label() + "'");
    }
}

StudySummary pool(std::span<const StudySummary> studies, std::string label) {
    if (studies.empty()) throw DomainError("cannot pool an empty sequence of studies");
    if (studies.size() == 1) {
        return StudySummary(std::move(label), studies.front().estimate(), studies.front().std_error(),
                            studies.front().scale());
    }
    // Sorting the terms makes the floating-point sums order independent.
    std::vector<std::pair<double, double>> terms;  // (precision, precision * estimate)
    terms.reserve(studies.size());
    for (const auto& s : studies) {
        const double precision = 1.0 / s.variance();
        terms.emplace_back(precision, precision * s.estimate());
    }
    std::sort(terms.begin(), terms.end());
    double precision_sum = 0.0;
    double weighted_sum = 0.0;
    for (const auto& [precision, weighted] : terms) {
        precision_sum += precision;
        weighted_sum += weighted;
    }
    std::optional<std::string> scale = studies.front().scale();
    for (const auto& s : studies) {
        if (s.scale() != scale) scale.reset();
    }
    return StudySummary(std::move(label), weighted_sum / precision_sum, std::sqrt(1.0 / precision_sum),
                        std::move(scale));
}

StudySummary round_summary(const StudySummary& study, int decimals) {
    const double factor = std::pow(10.0, decimals);
    auto round_to = [factor](double x) { return std::round(x * factor) / factor; };
    return StudySummary(study.label(), round_to(study.estimate()), round_to(study.std_error()), study.scale());
}

std::optional<DatasetFormat> format_from_path(std::string_view path) {
    const auto dot = path.rfind('.');
    if (dot == std::string_view::npos) return std::nullopt;
    std::string ext(path.substr(dot + 1));
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == "csv") return DatasetFormat::csv;
    if (ext == "json") return DatasetFormat::json;
    return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// Splits one CSV record; supports double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line, std::size_t row) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                current += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(was_quoted ? current : trim(current));
            current.clear();
            was_quoted = false;
        } else {
            current += c;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", row);
    fields.push_back(was_quoted ? current : trim(current));
    return fields;
}

double parse_number(const std::string& text, std::size_t row, const std::string& field) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
        throw ParseError("non-numeric value '" + text + "'", row, field);
    return value;
}

StudySummary make_study(std::string label, double estimate, double std_error, std::optional<std::string> scale,
                        std::size_t row) {
    if (label.empty()) throw ParseError("empty label", row, "label");
    if (!(std_error > 0.0)) throw ParseError("std_error must be positive", row, "std_error");
    return StudySummary(std::move(label), estimate, std_error, std::move(scale));
}

ReplicationSet assemble(std::optional<StudySummary> original, std::vector<StudySummary> replications,
                        const std::vector<std::size_t>& rows) {
    if (!original) throw ParseError("missing original study");
    if (replications.empty()) throw ParseError("no replications");
    std::set<std::string> labels{original->label()};
    for (std::size_t i = 0; i < replications.size(); ++i) {
        if (!labels.insert(replications[i].label()).second)
            throw ParseError("duplicate label '" + replications[i].label() + "'", rows[i], "label");
    }
    return ReplicationSet(std::move(*original), std::move(replications));
}

ReplicationSet parse_csv(std::string_view text) {
    if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t row = 0;
    std::vector<std::string> header;
    while (header.empty() && std::getline(in, line)) {
        ++row;
        if (!trim(line).empty()) header = split_csv_line(line, row);
    }
    if (header.empty()) throw ParseError("empty dataset");

    auto column = [&](const std::string& name, bool required) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            if (required) throw ParseError("missing column", 1, name);
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto label_col = *column("label", true);
    const auto role_col = *column("role", true);
    const auto estimate_col = *column("estimate", true);
    const auto se_col = *column("std_error", true);
    const auto scale_col = column("scale", false);

    std::optional<StudySummary> original;
    std::vector<StudySummary> replications;
    std::vector<std::size_t> rows;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line, row);
        if (fields.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             row);
        const double estimate = parse_number(fields[estimate_col], row, "estimate");
        const double se = parse_number(fields[se_col], row, "std_error");
        std::optional<std::string> scale;
        if (scale_col && !fields[*scale_col].empty()) scale = fields[*scale_col];
        auto study = make_study(fields[label_col], estimate, se, std::move(scale), row);
        const auto& role = fields[role_col];
        if (role == "original") {
            if (original) throw ParseError("more than one original study", row, "role");
            original = std::move(study);
        } else if (role == "replication") {
            replications.push_back(std::move(study));
            rows.push_back(row);
        } else {
            throw ParseError("unknown role '" + role + "'", row, "role");
        }
    }
    return assemble(std::move(original), std::move(replications), rows);
}

StudySummary study_from_json(const nlohmann::json& j, std::size_t row) {
    if (!j.is_object()) throw ParseError("study must be an object", row);
    auto require = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw ParseError("missing field", row, key);
        return j.at(key);
    };
    const auto& label = require("label");
    if (!label.is_string()) throw ParseError("label must be a string", row, "label");
    const auto& estimate = require("estimate");
    if (!estimate.is_number()) throw ParseError("non-numeric value", row, "estimate");
    const auto& se = require("std_error");
    if (!se.is_number()) throw ParseError("non-numeric value", row, "std_error");
    std::optional<std::string> scale;
    if (j.contains("scale") && !j.at("scale").is_null()) {
        if (!j.at("scale").is_string()) throw ParseError("scale must be a string", row, "scale");
        scale = j.at("scale").get<std::string>();
    }
    return make_study(label.get<std::string>(), estimate.get<double>(), se.get<double>(), std::move(scale), row);
}

ReplicationSet parse_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("dataset must be a JSON object");
    std::optional<StudySummary> original;
    if (doc.contains("original")) original = study_from_json(doc.at("original"), 1);
    if (!doc.contains("replications")) throw ParseError("no replications", std::nullopt, "replications");
    const auto& reps = doc.at("replications");
    if (!reps.is_array()) throw ParseError("replications must be an array", std::nullopt, "replications");
    std::vector<StudySummary> replications;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        replications.push_back(study_from_json(reps[i], i + 2));
        rows.push_back(i + 2);
    }
    return assemble(std::move(original), std::move(replications), rows);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos && trim(s) == s) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string exact_number(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

nlohmann::ordered_json study_to_json(const StudySummary& s) {
    nlohmann::ordered_json j{{"label", s.label()}, {"estimate", s.estimate()}, {"std_error", s.std_error()}};
    if (s.scale()) j["scale"] = *s.scale();
    return j;
}

}  // namespace

ReplicationSet parse_dataset(std::string_view text, DatasetFormat format) {
    try {
        return format == DatasetFormat::csv ? parse_csv(text) : parse_json(text);
    } catch (const ValidationError& e) {
        throw ParseError(e.what());
    }
}

ReplicationSet parse_dataset(std::istream& in, DatasetFormat format) {
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return parse_dataset(text, format);
}

std::string serialize_dataset(const ReplicationSet& data, DatasetFormat format) {
    if (format == DatasetFormat::json) {
        nlohmann::ordered_json doc;
        doc["original"] = study_to_json(data.original());
        doc["replications"] = nlohmann::ordered_json::array();
        for (const auto& rep : data.replications()) doc["replications"].push_back(study_to_json(rep));
        return doc.dump(2) + "\n";
    }
    bool any_scale = data.original().scale().has_value();
    for (const auto& rep : data.replications()) any_scale = any_scale || rep.scale().has_value();
    std::ostringstream os;
    os << "label,role,estimate,std_error" << (any_scale ? ",scale" : "") << "\n";
    auto row = [&](const StudySummary& s, const char* role) {
        os << csv_field(s.label()) << ',' << role << ',' << exact_number(s.estimate()) << ','
           << exact_number(s.std_error());
        if (any_scale) os << ',' << csv_field(s.scale().value_or(""));
        os << "\n";
    };
    row(data.original(), "original");
    for (const auto& rep : data.replications()) row(rep, "replication");
    return os.str();
}

}  // namespace repmix
