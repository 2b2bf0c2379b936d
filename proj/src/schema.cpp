#include "tgcn/schema.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace tgcn {

const char* kind_name(FeatureKind k) {
    switch (k) {
        case FeatureKind::Numeric: return "numeric";
        case FeatureKind::Binary: return "binary";
        case FeatureKind::Categorical: return "categorical";
    }
    return "?";
}

int FeatureSpec::category_index(const std::string& token) const {
    for (std::size_t i = 0; i < categories.size(); ++i)
        if (categories[i] == token) return static_cast<int>(i);
    return -1;
}

const FeatureSpec& FeatureSchema::at(int feature_id) const {
    if (feature_id < 0 || feature_id >= n_features())
        throw DataError("feature id out of range: " + std::to_string(feature_id));
    return features[static_cast<std::size_t>(feature_id)];
}

std::vector<int> FeatureSchema::non_categorical_ids() const {
    std::vector<int> out;
    for (const auto& f : features)
        if (f.kind != FeatureKind::Categorical) out.push_back(f.feature_id);
    return out;
}

std::vector<int> FeatureSchema::categorical_ids() const {
    std::vector<int> out;
    for (const auto& f : features)
        if (f.kind == FeatureKind::Categorical) out.push_back(f.feature_id);
    return out;
}

bool RawValue::compatible_with(FeatureKind kind) const {
    switch (tag) {
        case Tag::Missing: return true;
        case Tag::Number: return kind == FeatureKind::Numeric;
        case Tag::Bit: return kind == FeatureKind::Binary;
        case Tag::Token: return kind == FeatureKind::Categorical;
    }
    return false;
}

// --- schema parsing ----------------------------------------------------------

FeatureSchema parse_schema(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("schema: invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("features") || !doc["features"].is_array())
        throw DataError("schema: expected object with a \"features\" array");

    std::vector<FeatureSpec> specs;
    std::unordered_set<std::string> names;
    std::unordered_set<int> ids;
    for (const auto& jf : doc["features"]) {
        if (!jf.is_object()) throw DataError("schema: feature entry must be an object");
        FeatureSpec spec;
        if (!jf.contains("id") || !jf["id"].is_number_integer())
            throw DataError("schema: feature missing integer \"id\"");
        spec.feature_id = jf["id"].get<int>();
        if (!jf.contains("name") || !jf["name"].is_string())
            throw DataError("schema: feature missing string \"name\"");
        spec.name = jf["name"].get<std::string>();
        if (!jf.contains("kind") || !jf["kind"].is_string())
            throw DataError("schema: feature missing string \"kind\"");
        const std::string kind = jf["kind"].get<std::string>();
        if (kind == "numeric") {
            spec.kind = FeatureKind::Numeric;
        } else if (kind == "binary") {
            spec.kind = FeatureKind::Binary;
        } else if (kind == "categorical") {
            spec.kind = FeatureKind::Categorical;
        } else {
            throw DataError("schema: unknown kind \"" + kind + "\" for feature \"" + spec.name + "\"");
        }

        if (spec.kind == FeatureKind::Categorical) {
            if (!jf.contains("categories") || !jf["categories"].is_array() || jf["categories"].empty())
                throw DataError("schema: categorical feature \"" + spec.name +
                                "\" needs a nonempty \"categories\" list");
            std::unordered_set<std::string> seen;
            for (const auto& jc : jf["categories"]) {
                if (!jc.is_string())
                    throw DataError("schema: categories of \"" + spec.name + "\" must be strings");
                std::string tok = jc.get<std::string>();
                if (tok.empty() || tok.find_first_of(",\r\n") != std::string::npos)
                    throw DataError("schema: category token of \"" + spec.name +
                                    "\" must be nonempty and free of commas/newlines");
                if (!seen.insert(tok).second)
                    throw DataError("schema: duplicate category \"" + tok + "\" in feature \"" +
                                    spec.name + "\"");
                spec.categories.push_back(std::move(tok));
            }
        } else if (jf.contains("categories")) {
            throw DataError("schema: non-categorical feature \"" + spec.name +
                            "\" must not list categories");
        }

        if (!names.insert(spec.name).second)
            throw DataError("schema: duplicate feature name \"" + spec.name + "\"");
        if (!ids.insert(spec.feature_id).second)
            throw DataError("schema: duplicate feature id " + std::to_string(spec.feature_id));
        specs.push_back(std::move(spec));
    }

    std::sort(specs.begin(), specs.end(),
              [](const FeatureSpec& a, const FeatureSpec& b) { return a.feature_id < b.feature_id; });
    for (std::size_t i = 0; i < specs.size(); ++i)
        if (specs[i].feature_id != static_cast<int>(i))
            throw DataError("schema: feature ids must be contiguous from 0 (missing id " +
                            std::to_string(i) + ")");

    return FeatureSchema{std::move(specs)};
}

// --- CSV helpers -------------------------------------------------------------

namespace {

// Minimal CSV: comma-separated, no quoting (tokens are validated upstream to
// be comma/newline free).
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

bool getline_trim(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

bool parse_int(const std::string& s, int& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

}  // namespace

// --- triplet parsing ---------------------------------------------------------

TripletParseResult parse_triplets(std::istream& in, const FeatureSchema& schema, int n_patients) {
    if (n_patients < 0) throw DataError("parse_triplets: negative patient count");

    TripletParseResult result;
    result.cohort.n_patients = n_patients;
    result.cohort.schema = schema;

    std::string line;
    if (!getline_trim(in, line) || line != "patient_id,feature_id,value")
        throw DataError("triplets: expected header \"patient_id,feature_id,value\"");

    std::unordered_set<std::int64_t> seen;  // (patient, feature) pairs
    const std::int64_t M = schema.n_features();
    std::size_t line_no = 1;
    while (getline_trim(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++result.records_in;
        auto push_issue = [&](std::string msg) {
            result.issues.push_back({line_no, std::move(msg)});
        };

        auto fields = split_csv(line);
        if (fields.size() != 3) {
            push_issue("expected 3 fields, got " + std::to_string(fields.size()));
            continue;
        }
        int pid = 0, fid = 0;
        if (!parse_int(fields[0], pid)) {
            push_issue("bad patient_id \"" + fields[0] + "\"");
            continue;
        }
        if (!parse_int(fields[1], fid)) {
            push_issue("unknown feature reference \"" + fields[1] + "\"");
            continue;
        }
        if (pid < 0 || pid >= n_patients) {
            push_issue("patient_id " + std::to_string(pid) + " out of range [0, " +
                       std::to_string(n_patients) + ")");
            continue;
        }
        if (fid < 0 || fid >= schema.n_features()) {
            push_issue("unknown feature reference " + std::to_string(fid));
            continue;
        }
        const FeatureSpec& spec = schema.features[static_cast<std::size_t>(fid)];

        RawValue value;
        const std::string& raw = fields[2];
        if (raw.empty()) {
            value = RawValue::missing();
        } else {
            switch (spec.kind) {
                case FeatureKind::Numeric: {
                    double x = 0.0;
                    if (!parse_number(raw, x)) {
                        push_issue("value \"" + raw + "\" is not numeric (feature \"" + spec.name +
                                   "\")");
                        continue;
                    }
                    value = RawValue::from_number(x);
                    break;
                }
                case FeatureKind::Binary: {
                    if (raw == "0" || raw == "1") {
                        value = RawValue::from_bit(raw == "1" ? 1 : 0);
                    } else {
                        push_issue("value \"" + raw + "\" is not 0/1 (binary feature \"" +
                                   spec.name + "\")");
                        continue;
                    }
                    break;
                }
                case FeatureKind::Categorical: {
                    if (spec.category_index(raw) < 0) {
                        push_issue("value \"" + raw + "\" is not a category of feature \"" +
                                   spec.name + "\"");
                        continue;
                    }
                    value = RawValue::from_token(raw);
                    break;
                }
            }
        }

        std::int64_t key = static_cast<std::int64_t>(pid) * M + fid;
        if (!seen.insert(key).second) {
            push_issue("duplicate record for patient " + std::to_string(pid) + ", feature " +
                       std::to_string(fid));
            continue;
        }
        result.cohort.triplets.push_back(Triplet{pid, fid, std::move(value)});
    }
    return result;
}

Cohort parse_triplets_strict(std::istream& in, const FeatureSchema& schema, int n_patients) {
    TripletParseResult res = parse_triplets(in, schema, n_patients);
    if (!res.issues.empty()) {
        const ParseIssue& first = res.issues.front();
        throw DataError("triplets line " + std::to_string(first.line) + ": " + first.message +
                        (res.issues.size() > 1
                             ? " (+" + std::to_string(res.issues.size() - 1) + " more)"
                             : ""));
    }
    return std::move(res.cohort);
}

std::vector<int> parse_labels(std::istream& in, int n_patients) {
    std::string line;
    if (!getline_trim(in, line) || line != "patient_id,label")
        throw DataError("labels: expected header \"patient_id,label\"");

    std::vector<int> labels(static_cast<std::size_t>(n_patients), -1);
    std::size_t line_no = 1;
    while (getline_trim(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_csv(line);
        int pid = 0, lab = 0;
        if (fields.size() != 2 || !parse_int(fields[0], pid) || !parse_int(fields[1], lab))
            throw DataError("labels line " + std::to_string(line_no) + ": malformed record");
        if (pid < 0 || pid >= n_patients)
            throw DataError("labels line " + std::to_string(line_no) + ": patient_id out of range");
        if (lab != 0 && lab != 1)
            throw DataError("labels line " + std::to_string(line_no) + ": label must be 0 or 1");
        if (labels[static_cast<std::size_t>(pid)] != -1)
            throw DataError("labels line " + std::to_string(line_no) + ": duplicate label for patient " +
                            std::to_string(pid));
        labels[static_cast<std::size_t>(pid)] = lab;
    }
    for (int i = 0; i < n_patients; ++i)
        if (labels[static_cast<std::size_t>(i)] == -1)
            throw DataError("labels: no label for patient " + std::to_string(i));
    return labels;
}

// --- serialization -----------------------------------------------------------

std::string write_schema_json(const FeatureSchema& schema) {
    std::string out = "{\"features\":[";
    for (std::size_t i = 0; i < schema.features.size(); ++i) {
        const FeatureSpec& f = schema.features[i];
        if (i) out += ',';
        out += "{\"id\":" + std::to_string(f.feature_id) + ",\"name\":\"" + json_escape(f.name) +
               "\",\"kind\":\"" + kind_name(f.kind) + "\"";
        if (f.kind == FeatureKind::Categorical) {
            out += ",\"categories\":[";
            for (std::size_t c = 0; c < f.categories.size(); ++c) {
                if (c) out += ',';
                out += "\"" + json_escape(f.categories[c]) + "\"";
            }
            out += "]";
        }
        out += "}";
    }
    out += "]}\n";
    return out;
}

std::string write_triplets_csv(const Cohort& cohort) {
    std::string out = "patient_id,feature_id,value\n";
    for (const Triplet& t : cohort.triplets) {
        out += std::to_string(t.patient_id);
        out += ',';
        out += std::to_string(t.feature_id);
        out += ',';
        switch (t.value.tag) {
            case RawValue::Tag::Missing: break;
            case RawValue::Tag::Number: out += format_shortest(t.value.number); break;
            case RawValue::Tag::Bit: out += t.value.bit ? '1' : '0'; break;
            case RawValue::Tag::Token: out += t.value.token; break;
        }
        out += '\n';
    }
    return out;
}

std::string write_labels_csv(const std::vector<int>& labels) {
    std::string out = "patient_id,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
        out += std::to_string(i) + "," + std::to_string(labels[i]) + "\n";
    return out;
}

std::string schema_fingerprint(const FeatureSchema& schema) {
    return to_hex(fnv1a64(write_schema_json(schema)));
}

// --- validation --------------------------------------------------------------

ValidationReport validate_cohort(const Cohort& cohort) {
    ValidationReport report;
    const int M = cohort.schema.n_features();
    std::vector<int> observed(static_cast<std::size_t>(M), 0);
    for (const Triplet& t : cohort.triplets)
        if (!t.value.is_missing()) observed[static_cast<std::size_t>(t.feature_id)]++;

    for (int f = 0; f < M; ++f) {
        FeatureReport fr;
        fr.feature_id = f;
        fr.observed_count = observed[static_cast<std::size_t>(f)];
        fr.missing_rate = cohort.n_patients > 0
                              ? 1.0 - static_cast<double>(fr.observed_count) / cohort.n_patients
                              : 0.0;
        fr.unobserved = fr.observed_count == 0;
        report.features.push_back(fr);
    }

    if (cohort.labels.has_value() && !cohort.labels->empty()) {
        double pos = 0;
        for (int y : *cohort.labels) pos += y;
        report.label_prevalence = pos / static_cast<double>(cohort.labels->size());
    }
    return report;
}

Cohort subset_cohort(const Cohort& cohort, const std::vector<int>& patient_ids) {
    std::vector<int> remap(static_cast<std::size_t>(cohort.n_patients), -1);
    for (std::size_t i = 0; i < patient_ids.size(); ++i) {
        int p = patient_ids[i];
        if (p < 0 || p >= cohort.n_patients) throw DataError("subset_cohort: index out of range");
        if (remap[static_cast<std::size_t>(p)] != -1) throw DataError("subset_cohort: duplicate index");
        remap[static_cast<std::size_t>(p)] = static_cast<int>(i);
    }

    Cohort sub;
    sub.n_patients = static_cast<int>(patient_ids.size());
    sub.schema = cohort.schema;
    for (const Triplet& t : cohort.triplets) {
        int np = remap[static_cast<std::size_t>(t.patient_id)];
        if (np >= 0) sub.triplets.push_back(Triplet{np, t.feature_id, t.value});
    }
    if (cohort.labels.has_value()) {
        std::vector<int> labels(patient_ids.size());
        for (std::size_t i = 0; i < patient_ids.size(); ++i)
            labels[i] = (*cohort.labels)[static_cast<std::size_t>(patient_ids[i])];
        sub.labels = std::move(labels);
    }
    return sub;
}

}  // namespace tgcn
