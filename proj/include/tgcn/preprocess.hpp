#pragma once

#include <cstdint>
#include <vector>

#include "tgcn/schema.hpp"

namespace tgcn {

// Per-feature statistics fitted on the training split and then frozen.
struct FeatureStats {
    FeatureKind kind = FeatureKind::Numeric;
    double median = 0.0;  // numeric only
    double mu = 0.0;      // numeric only
    double sigma = 1.0;   // numeric only, population std, floored to 1 if degenerate
    int mode = 0;         // categorical only: category index
    bool fallback = false;  // zero training observations; defaults substituted

    bool operator==(const FeatureStats&) const = default;
};

struct PreprocessStats {
    int fitted_on = 0;                  // number of training patients
    bool stats_after_impute = false;    // mode mu/sigma were computed in
    std::vector<FeatureStats> features; // indexed by feature_id

    bool operator==(const PreprocessStats&) const = default;
};

// Fully imputed per-edge values. Non-categorical values form a dense
// N x K grid (K = number of non-categorical features, schema order);
// categorical features carry a per-patient category index and no edge.
struct ProcessedCohort {
    int n_patients = 0;
    FeatureSchema schema;
    std::vector<int> edge_features;     // K non-categorical feature ids
    std::vector<int> cat_features;      // categorical feature ids
    std::vector<double> values;         // N*K, row-major by patient
    std::vector<std::uint8_t> observed; // N*K, 1 = originally observed
    std::vector<int> cat_index;         // N*n_cat, category index per patient

    int n_edge_features() const { return static_cast<int>(edge_features.size()); }
    int n_cat_features() const { return static_cast<int>(cat_features.size()); }

    double v(int patient, int j) const {
        return values[static_cast<std::size_t>(patient) * edge_features.size() + j];
    }
    bool m(int patient, int j) const {
        return observed[static_cast<std::size_t>(patient) * edge_features.size() + j] != 0;
    }
    int cat(int patient, int k) const {
        return cat_index[static_cast<std::size_t>(patient) * cat_features.size() + k];
    }
};

// Lower median: sorted[(n-1)/2]; exact and deterministic for even counts.
double median(std::vector<double> values);

// Fit medians/means/stds (numeric) and modes (categorical) over the observed
// values of the patients in train_indices. With stats_after_impute, mu/sigma
// are instead taken over the median-imputed training matrix.
PreprocessStats fit(const Cohort& train, const std::vector<int>& train_indices,
                    bool stats_after_impute = false);

// Apply frozen stats: numeric -> median-impute + standardize, binary ->
// effect coding {-1,0,+1}, categorical -> mode-imputed category index.
ProcessedCohort transform(const Cohort& cohort, const PreprocessStats& stats);

// Deterministic JSON (fixed field order, %.17g floats); embedded in checkpoints.
std::string write_stats_json(const PreprocessStats& stats);
PreprocessStats parse_stats_json(const std::string& text);

}  // namespace tgcn
