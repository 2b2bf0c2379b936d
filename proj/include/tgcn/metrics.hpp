#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tgcn {

struct SplitResult {
    std::vector<int> train_idx, test_idx;  // sorted, disjoint, exhaustive
};

// Per-class test counts = round(class_count * test_fraction); shuffle order is
// a deterministic function of the seed.
SplitResult stratified_split(const std::vector<int>& labels, double test_fraction,
                             std::uint64_t seed);

struct Confusion {
    long long tp = 0, fp = 0, tn = 0, fn = 0;

    long long total() const { return tp + fp + tn + fn; }
    bool operator==(const Confusion&) const = default;
};

// Predict positive iff score >= threshold.
Confusion confusion(const std::vector<double>& scores, const std::vector<int>& labels,
                    double threshold);

// NaN marks an undefined rate (zero denominator); serialized as "NA".
struct MetricsReport {
    double auc, auc_ci_low, auc_ci_high;
    double sensitivity, specificity, ppv, npv, f1, accuracy;
    double threshold = 0.5;
    Confusion counts;

    MetricsReport();
};

// Rates from a confusion matrix; AUC fields are left undefined (NaN).
MetricsReport compute_metrics(const Confusion& cm);

// Mann-Whitney AUC via rank sums with average ranks for ties. Throws on
// single-class input; auc_or_nan returns NaN instead.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);
double auc_or_nan(const std::vector<double>& scores, const std::vector<int>& labels);

struct AucCi {
    double low = 0.0, high = 0.0;
};

// Percentile bootstrap over resampled patients; single-class resamples are
// redrawn. Replicate r draws from an RNG stream seeded by (seed, r).
AucCi bootstrap_auc_ci(const std::vector<double>& scores, const std::vector<int>& labels,
                       int n_boot, std::uint64_t seed);

// Threshold maximizing Youden's J = sensitivity + specificity - 1 over the
// observed scores; ties resolve to the smallest threshold.
double youden_threshold(const std::vector<double>& scores, const std::vector<int>& labels);

// Full report: confusion rates at the threshold plus AUC and bootstrap CI
// (NaN when labels are single-class).
MetricsReport evaluate(const std::vector<double>& scores, const std::vector<int>& labels,
                       double threshold, int n_boot, std::uint64_t seed);

std::string metrics_to_json(const MetricsReport& report);

// Aligned table in Table-style column order; percentages with 2 decimals.
std::string metrics_table(const MetricsReport& report, const std::string& row_label);

}  // namespace tgcn
