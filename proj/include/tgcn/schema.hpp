#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tgcn/util.hpp"

namespace tgcn {

enum class FeatureKind { Numeric, Binary, Categorical };

const char* kind_name(FeatureKind k);

struct FeatureSpec {
    int feature_id = 0;
    std::string name;
    FeatureKind kind = FeatureKind::Numeric;
    std::vector<std::string> categories;  // nonempty iff kind == Categorical

    int category_index(const std::string& token) const;  // -1 if unknown

    bool operator==(const FeatureSpec&) const = default;
};

// Validated feature list; specs are stored in feature_id order (0..M-1).
struct FeatureSchema {
    std::vector<FeatureSpec> features;

    int n_features() const { return static_cast<int>(features.size()); }
    const FeatureSpec& at(int feature_id) const;
    std::vector<int> non_categorical_ids() const;  // schema order
    std::vector<int> categorical_ids() const;      // schema order

    bool operator==(const FeatureSchema&) const = default;
};

// One raw observation value. An explicit-missing record and an absent record
// take the same imputation path downstream.
struct RawValue {
    enum class Tag { Missing, Number, Bit, Token };
    Tag tag = Tag::Missing;
    double number = 0.0;
    int bit = 0;
    std::string token;

    static RawValue missing() { return RawValue{}; }
    static RawValue from_number(double x) { return RawValue{Tag::Number, x, 0, {}}; }
    static RawValue from_bit(int b) { return RawValue{Tag::Bit, 0.0, b, {}}; }
    static RawValue from_token(std::string t) { return RawValue{Tag::Token, 0.0, 0, std::move(t)}; }

    bool is_missing() const { return tag == Tag::Missing; }
    bool compatible_with(FeatureKind kind) const;

    bool operator==(const RawValue&) const = default;
};

struct Triplet {
    int patient_id = 0;
    int feature_id = 0;
    RawValue value;

    bool operator==(const Triplet&) const = default;
};

struct Cohort {
    int n_patients = 0;
    FeatureSchema schema;
    std::vector<Triplet> triplets;              // at most one per (patient, feature)
    std::optional<std::vector<int>> labels;     // size n_patients, values in {0,1}

    bool operator==(const Cohort&) const = default;
};

// --- parsing ---------------------------------------------------------------

// Schema file: {"features":[{"id":..,"name":..,"kind":..,"categories":[..]?}]}
FeatureSchema parse_schema(const std::string& text);

struct ParseIssue {
    std::size_t line = 0;
    std::string message;
};

struct TripletParseResult {
    Cohort cohort;
    std::vector<ParseIssue> issues;
    std::size_t records_in = 0;  // accepted + issues == records_in
};

// Triplet CSV (`patient_id,feature_id,value`; empty value = explicit missing).
// Collects per-record issues instead of dropping records silently.
TripletParseResult parse_triplets(std::istream& in, const FeatureSchema& schema, int n_patients);

// Strict variant: throws DataError on the first invalid record.
Cohort parse_triplets_strict(std::istream& in, const FeatureSchema& schema, int n_patients);

// Label CSV (`patient_id,label`): exactly one label per patient 0..N-1.
std::vector<int> parse_labels(std::istream& in, int n_patients);

// --- serialization (canonical, byte-deterministic) --------------------------

std::string write_schema_json(const FeatureSchema& schema);
std::string write_triplets_csv(const Cohort& cohort);
std::string write_labels_csv(const std::vector<int>& labels);

// FNV-1a over the canonical schema JSON; checkpoint compatibility check.
std::string schema_fingerprint(const FeatureSchema& schema);

// --- validation report -------------------------------------------------------

struct FeatureReport {
    int feature_id = 0;
    int observed_count = 0;
    double missing_rate = 0.0;
    bool unobserved = false;
};

struct ValidationReport {
    std::vector<FeatureReport> features;
    std::optional<double> label_prevalence;
};

ValidationReport validate_cohort(const Cohort& cohort);

// Re-indexed sub-cohort over `patient_ids` (must be sorted, unique, in range).
Cohort subset_cohort(const Cohort& cohort, const std::vector<int>& patient_ids);

}  // namespace tgcn
