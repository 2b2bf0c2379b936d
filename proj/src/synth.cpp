#include "tgcn/synth.hpp"

#include <algorithm>
#include <cmath>

#include "tgcn/rng.hpp"
#include "tgcn/util.hpp"

namespace tgcn {

void SynthConfig::validate() const {
    if (n_patients < 2) throw ConfigError("synth: n_patients must be >= 2");
    if (n_numeric < 0 || n_binary < 0 || n_categorical < 0)
        throw ConfigError("synth: feature counts must be >= 0");
    if (n_numeric + n_binary + n_categorical < 1)
        throw ConfigError("synth: at least one feature required");
    if (n_categorical > 0 && n_categories < 2)
        throw ConfigError("synth: n_categories must be >= 2");
    if (!(prevalence > 0.0 && prevalence < 1.0))
        throw ConfigError("synth: prevalence must be in (0,1)");
    if (missing_rate < 0.0 || missing_rate >= 1.0)
        throw ConfigError("synth: missing_rate must be in [0,1)");
    if (!(noise_std >= 0.0)) throw ConfigError("synth: noise_std must be >= 0");
}

namespace {

// Independent draw streams, so e.g. the missingness mask never shifts the
// feature values drawn under a different missing_rate.
enum SeedTag : std::uint64_t { kValues = 0, kNoise = 1, kLabels = 2, kMask = 3 };

FeatureSchema make_schema(const SynthConfig& cfg) {
    FeatureSchema schema;
    int id = 0;
    for (int j = 0; j < cfg.n_numeric; ++j) {
        FeatureSpec f;
        f.feature_id = id++;
        f.name = "num_" + std::to_string(j);
        f.kind = FeatureKind::Numeric;
        schema.features.push_back(std::move(f));
    }
    for (int j = 0; j < cfg.n_binary; ++j) {
        FeatureSpec f;
        f.feature_id = id++;
        f.name = "bin_" + std::to_string(j);
        f.kind = FeatureKind::Binary;
        schema.features.push_back(std::move(f));
    }
    for (int j = 0; j < cfg.n_categorical; ++j) {
        FeatureSpec f;
        f.feature_id = id++;
        f.name = "cat_" + std::to_string(j);
        f.kind = FeatureKind::Categorical;
        for (int c = 0; c < cfg.n_categories; ++c) f.categories.push_back("c" + std::to_string(c));
        schema.features.push_back(std::move(f));
    }
    return schema;
}

double logit(double u) { return std::log(u) - std::log1p(-u); }

}  // namespace

SynthResult generate_full(const SynthConfig& cfg) {
    cfg.validate();
    const int n = cfg.n_patients;

    SynthResult res;
    res.cohort.n_patients = n;
    res.cohort.schema = make_schema(cfg);

    res.coefficients.assign(static_cast<std::size_t>(cfg.n_numeric), 0.0);
    const int informative = (cfg.n_numeric + 1) / 2;
    for (int j = 0; j < informative; ++j)
        res.coefficients[static_cast<std::size_t>(j)] = cfg.signal_strength;

    // Feature values, patient-major in feature order.
    Rng values_rng(mix_seed(cfg.seed, kValues));
    std::vector<double> numeric(static_cast<std::size_t>(n) * static_cast<std::size_t>(cfg.n_numeric));
    std::vector<int> binary(static_cast<std::size_t>(n) * static_cast<std::size_t>(cfg.n_binary));
    std::vector<int> categorical(static_cast<std::size_t>(n) *
                                 static_cast<std::size_t>(cfg.n_categorical));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < cfg.n_numeric; ++j)
            numeric[static_cast<std::size_t>(i) * cfg.n_numeric + j] = values_rng.normal();
        for (int j = 0; j < cfg.n_binary; ++j)
            binary[static_cast<std::size_t>(i) * cfg.n_binary + j] = values_rng.bernoulli(0.5);
        for (int j = 0; j < cfg.n_categorical; ++j)
            categorical[static_cast<std::size_t>(i) * cfg.n_categorical + j] =
                values_rng.below(cfg.n_categories);
    }

    Rng noise_rng(mix_seed(cfg.seed, kNoise));
    Rng label_rng(mix_seed(cfg.seed, kLabels));
    // label_i(c) = 1 iff u_i < sigmoid(latent_i + c) iff c > logit(u_i) - latent_i.
    std::vector<double> flip_at(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double latent = 0.0;
        for (int j = 0; j < cfg.n_numeric; ++j)
            latent += res.coefficients[static_cast<std::size_t>(j)] *
                      numeric[static_cast<std::size_t>(i) * cfg.n_numeric + j];
        latent += cfg.noise_std * noise_rng.normal();
        double u = label_rng.uniform01();
        if (u <= 0.0) u = 0x1.0p-53;  // keep logit finite
        flip_at[static_cast<std::size_t>(i)] = logit(u) - latent;
    }

    // Bisect the intercept against the realized label draws; prevalence(c) is a
    // monotone step function of c, so this terminates well inside 100 steps
    // whenever any realizable prevalence lies in the +-0.02 window.
    double lo = *std::min_element(flip_at.begin(), flip_at.end()) - 1.0;
    double hi = *std::max_element(flip_at.begin(), flip_at.end()) + 1.0;
    double intercept = 0.0;
    bool calibrated = false;
    for (int step = 0; step < 100; ++step) {
        intercept = 0.5 * (lo + hi);
        int pos = 0;
        for (double t : flip_at) pos += intercept > t;
        double prev = static_cast<double>(pos) / n;
        if (std::abs(prev - cfg.prevalence) <= 0.02) {
            calibrated = true;
            res.realized_prevalence = prev;
            break;
        }
        (prev < cfg.prevalence ? lo : hi) = intercept;
    }
    if (!calibrated)
        throw NumericError("synth: intercept calibration failed after 100 bisection steps "
                           "(target prevalence " +
                           format_shortest(cfg.prevalence) + " unreachable for n=" +
                           std::to_string(n) + ")");
    res.intercept = intercept;

    std::vector<int> labels(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        labels[static_cast<std::size_t>(i)] = intercept > flip_at[static_cast<std::size_t>(i)];
    res.cohort.labels = std::move(labels);

    // Triplets; non-categorical values drop out MCAR, categoricals always emit.
    Rng mask_rng(mix_seed(cfg.seed, kMask));
    for (int i = 0; i < n; ++i) {
        int id = 0;
        for (int j = 0; j < cfg.n_numeric; ++j, ++id) {
            bool drop = cfg.missing_rate > 0.0 && mask_rng.bernoulli(cfg.missing_rate);
            if (!drop)
                res.cohort.triplets.push_back(
                    {i, id,
                     RawValue::from_number(numeric[static_cast<std::size_t>(i) * cfg.n_numeric + j])});
        }
        for (int j = 0; j < cfg.n_binary; ++j, ++id) {
            bool drop = cfg.missing_rate > 0.0 && mask_rng.bernoulli(cfg.missing_rate);
            if (!drop)
                res.cohort.triplets.push_back(
                    {i, id,
                     RawValue::from_bit(binary[static_cast<std::size_t>(i) * cfg.n_binary + j])});
        }
        for (int j = 0; j < cfg.n_categorical; ++j, ++id) {
            int c = categorical[static_cast<std::size_t>(i) * cfg.n_categorical + j];
            res.cohort.triplets.push_back(
                {i, id, RawValue::from_token(res.cohort.schema.at(id).categories[
                            static_cast<std::size_t>(c)])});
        }
    }
    return res;
}

Cohort generate(const SynthConfig& config) { return generate_full(config).cohort; }

std::string provenance_json(const SynthConfig& cfg, const SynthResult& res) {
    std::string out = "{\"config\":{";
    out += "\"n_patients\":" + std::to_string(cfg.n_patients);
    out += ",\"n_numeric\":" + std::to_string(cfg.n_numeric);
    out += ",\"n_binary\":" + std::to_string(cfg.n_binary);
    out += ",\"n_categorical\":" + std::to_string(cfg.n_categorical);
    out += ",\"n_categories\":" + std::to_string(cfg.n_categories);
    out += ",\"prevalence\":" + format_g17(cfg.prevalence);
    out += ",\"signal_strength\":" + format_g17(cfg.signal_strength);
    out += ",\"missing_rate\":" + format_g17(cfg.missing_rate);
    out += ",\"noise_std\":" + format_g17(cfg.noise_std);
    out += ",\"seed\":" + std::to_string(cfg.seed);
    out += "},\"coefficients\":[";
    for (std::size_t j = 0; j < res.coefficients.size(); ++j) {
        if (j) out += ",";
        out += format_g17(res.coefficients[j]);
    }
    out += "],\"intercept\":" + format_g17(res.intercept);
    out += ",\"realized_prevalence\":" + format_g17(res.realized_prevalence);
    out += "}\n";
    return out;
}

}  // namespace tgcn
