#include "tgcn/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace tgcn {

namespace {
constexpr double kDegenerateStd = 1e-12;

struct MeanStd {
    double mu = 0.0;
    double sigma = 1.0;
};

MeanStd mean_popstd(const std::vector<double>& xs) {
    MeanStd out;
    double sum = 0.0;
    for (double x : xs) sum += x;
    out.mu = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mu) * (x - out.mu);
    double var = ss / static_cast<double>(xs.size());
    double sd = std::sqrt(var);
    out.sigma = sd < kDegenerateStd ? 1.0 : sd;
    return out;
}
}  // namespace

double median(std::vector<double> values) {
    if (values.empty()) throw DataError("median: empty list");
    std::size_t k = (values.size() - 1) / 2;  // lower median for even counts
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
    return values[k];
}

PreprocessStats fit(const Cohort& train, const std::vector<int>& train_indices,
                    bool stats_after_impute) {
    if (train_indices.empty()) throw DataError("fit: empty training set");
    std::vector<std::uint8_t> in_train(static_cast<std::size_t>(train.n_patients), 0);
    for (int p : train_indices) {
        if (p < 0 || p >= train.n_patients) throw DataError("fit: train index out of range");
        in_train[static_cast<std::size_t>(p)] = 1;
    }

    const int M = train.schema.n_features();
    std::vector<std::vector<double>> numeric_obs(static_cast<std::size_t>(M));
    std::vector<std::vector<int>> cat_counts(static_cast<std::size_t>(M));
    for (const FeatureSpec& f : train.schema.features)
        if (f.kind == FeatureKind::Categorical)
            cat_counts[static_cast<std::size_t>(f.feature_id)].assign(f.categories.size(), 0);

    for (const Triplet& t : train.triplets) {
        if (!in_train[static_cast<std::size_t>(t.patient_id)] || t.value.is_missing()) continue;
        const FeatureSpec& spec = train.schema.at(t.feature_id);
        if (spec.kind == FeatureKind::Numeric) {
            numeric_obs[static_cast<std::size_t>(t.feature_id)].push_back(t.value.number);
        } else if (spec.kind == FeatureKind::Categorical) {
            int c = spec.category_index(t.value.token);
            cat_counts[static_cast<std::size_t>(t.feature_id)][static_cast<std::size_t>(c)]++;
        }
    }

    PreprocessStats stats;
    stats.fitted_on = static_cast<int>(train_indices.size());
    stats.stats_after_impute = stats_after_impute;
    stats.features.resize(static_cast<std::size_t>(M));
    for (const FeatureSpec& spec : train.schema.features) {
        FeatureStats& fs = stats.features[static_cast<std::size_t>(spec.feature_id)];
        fs.kind = spec.kind;
        switch (spec.kind) {
            case FeatureKind::Numeric: {
                auto& obs = numeric_obs[static_cast<std::size_t>(spec.feature_id)];
                if (obs.empty()) {
                    fs.fallback = true;
                    fs.median = 0.0;
                    fs.mu = 0.0;
                    fs.sigma = 1.0;
                    warn("feature \"" + spec.name + "\" has no observed training values; using defaults");
                    break;
                }
                fs.median = median(obs);
                if (stats_after_impute) {
                    // Imputed training column: observed values plus one median
                    // per missing training patient.
                    std::vector<double> imputed = obs;
                    imputed.resize(train_indices.size(), fs.median);
                    MeanStd ms = mean_popstd(imputed);
                    fs.mu = ms.mu;
                    fs.sigma = ms.sigma;
                } else {
                    MeanStd ms = mean_popstd(obs);
                    fs.mu = ms.mu;
                    fs.sigma = ms.sigma;
                }
                break;
            }
            case FeatureKind::Binary: {
                // Effect coding needs no fitted statistics.
                break;
            }
            case FeatureKind::Categorical: {
                const auto& counts = cat_counts[static_cast<std::size_t>(spec.feature_id)];
                int best = 0, best_count = 0;
                for (std::size_t c = 0; c < counts.size(); ++c) {
                    if (counts[c] > best_count) {
                        best_count = counts[c];
                        best = static_cast<int>(c);
                    }
                }
                if (best_count == 0) {
                    fs.fallback = true;
                    fs.mode = 0;
                    warn("feature \"" + spec.name + "\" has no observed training values; mode set to category 0");
                } else {
                    fs.mode = best;
                }
                break;
            }
        }
    }
    return stats;
}

ProcessedCohort transform(const Cohort& cohort, const PreprocessStats& stats) {
    const int M = cohort.schema.n_features();
    if (static_cast<int>(stats.features.size()) != M)
        throw DataError("transform: stats cover " + std::to_string(stats.features.size()) +
                        " features, schema has " + std::to_string(M));
    for (int f = 0; f < M; ++f)
        if (stats.features[static_cast<std::size_t>(f)].kind != cohort.schema.at(f).kind)
            throw DataError("transform: feature kind mismatch at id " + std::to_string(f));

    ProcessedCohort out;
    out.n_patients = cohort.n_patients;
    out.schema = cohort.schema;
    out.edge_features = cohort.schema.non_categorical_ids();
    out.cat_features = cohort.schema.categorical_ids();
    const int K = out.n_edge_features();
    const int C = out.n_cat_features();

    std::vector<int> edge_col(static_cast<std::size_t>(M), -1);
    for (int j = 0; j < K; ++j) edge_col[static_cast<std::size_t>(out.edge_features[j])] = j;
    std::vector<int> cat_col(static_cast<std::size_t>(M), -1);
    for (int k = 0; k < C; ++k) cat_col[static_cast<std::size_t>(out.cat_features[k])] = k;

    const std::size_t N = static_cast<std::size_t>(cohort.n_patients);
    out.values.assign(N * static_cast<std::size_t>(K), 0.0);
    out.observed.assign(N * static_cast<std::size_t>(K), 0);
    out.cat_index.assign(N * static_cast<std::size_t>(C), -1);

    // Start from the all-missing state, then overwrite with observations.
    for (int p = 0; p < cohort.n_patients; ++p) {
        for (int j = 0; j < K; ++j) {
            const FeatureStats& fs = stats.features[static_cast<std::size_t>(out.edge_features[j])];
            double v = 0.0;  // binary missing -> 0
            if (fs.kind == FeatureKind::Numeric) v = (fs.median - fs.mu) / fs.sigma;
            out.values[static_cast<std::size_t>(p) * K + j] = v;
        }
        for (int k = 0; k < C; ++k) {
            const FeatureStats& fs = stats.features[static_cast<std::size_t>(out.cat_features[k])];
            out.cat_index[static_cast<std::size_t>(p) * C + k] = fs.mode;
        }
    }

    for (const Triplet& t : cohort.triplets) {
        if (t.value.is_missing()) continue;
        const FeatureSpec& spec = cohort.schema.at(t.feature_id);
        if (!t.value.compatible_with(spec.kind))
            throw DataError("transform: value tag incompatible with feature \"" + spec.name + "\"");
        const FeatureStats& fs = stats.features[static_cast<std::size_t>(t.feature_id)];
        switch (spec.kind) {
            case FeatureKind::Numeric: {
                int j = edge_col[static_cast<std::size_t>(t.feature_id)];
                std::size_t idx = static_cast<std::size_t>(t.patient_id) * K + j;
                out.values[idx] = (t.value.number - fs.mu) / fs.sigma;
                out.observed[idx] = 1;
                break;
            }
            case FeatureKind::Binary: {
                int j = edge_col[static_cast<std::size_t>(t.feature_id)];
                std::size_t idx = static_cast<std::size_t>(t.patient_id) * K + j;
                out.values[idx] = t.value.bit ? 1.0 : -1.0;
                out.observed[idx] = 1;
                break;
            }
            case FeatureKind::Categorical: {
                int k = cat_col[static_cast<std::size_t>(t.feature_id)];
                out.cat_index[static_cast<std::size_t>(t.patient_id) * C + k] =
                    spec.category_index(t.value.token);
                break;
            }
        }
    }
    return out;
}

// --- stats serialization ------------------------------------------------------

std::string write_stats_json(const PreprocessStats& stats) {
    std::string out = "{\"fitted_on\":" + std::to_string(stats.fitted_on) +
                      ",\"stats_after_impute\":" + (stats.stats_after_impute ? "true" : "false") +
                      ",\"features\":[";
    for (std::size_t f = 0; f < stats.features.size(); ++f) {
        const FeatureStats& fs = stats.features[f];
        if (f) out += ',';
        out += "{\"id\":" + std::to_string(f) + ",\"kind\":\"" + kind_name(fs.kind) + "\"";
        if (fs.kind == FeatureKind::Numeric)
            out += ",\"median\":" + format_g17(fs.median) + ",\"mu\":" + format_g17(fs.mu) +
                   ",\"sigma\":" + format_g17(fs.sigma);
        if (fs.kind == FeatureKind::Categorical) out += ",\"mode\":" + std::to_string(fs.mode);
        if (fs.fallback) out += ",\"fallback\":true";
        out += "}";
    }
    out += "]}";
    return out;
}

PreprocessStats parse_stats_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("stats: invalid JSON: ") + e.what());
    }
    PreprocessStats stats;
    stats.fitted_on = doc.at("fitted_on").get<int>();
    stats.stats_after_impute = doc.value("stats_after_impute", false);
    for (const auto& jf : doc.at("features")) {
        FeatureStats fs;
        std::string kind = jf.at("kind").get<std::string>();
        if (kind == "numeric") {
            fs.kind = FeatureKind::Numeric;
            fs.median = jf.at("median").get<double>();
            fs.mu = jf.at("mu").get<double>();
            fs.sigma = jf.at("sigma").get<double>();
        } else if (kind == "binary") {
            fs.kind = FeatureKind::Binary;
        } else if (kind == "categorical") {
            fs.kind = FeatureKind::Categorical;
            fs.mode = jf.at("mode").get<int>();
        } else {
            throw DataError("stats: unknown kind \"" + kind + "\"");
        }
        fs.fallback = jf.value("fallback", false);
        stats.features.push_back(fs);
    }
    return stats;
}

}  // namespace tgcn
