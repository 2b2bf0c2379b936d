#include <doctest.h>

#include <cmath>
#include <map>
#include <utility>

#include <json.hpp>

#include "tgcn/synth.hpp"
#include "tgcn/util.hpp"

using namespace tgcn;

namespace {

SynthConfig small_config() {
    SynthConfig cfg;
    cfg.n_patients = 120;
    cfg.n_numeric = 6;
    cfg.n_binary = 3;
    cfg.n_categorical = 2;
    cfg.seed = 9;
    return cfg;
}

}  // namespace

TEST_CASE("generator is deterministic down to the serialized bytes") {
    SynthConfig cfg = small_config();
    SynthResult a = generate_full(cfg);
    SynthResult b = generate_full(cfg);
    CHECK(a.cohort == b.cohort);
    CHECK(write_schema_json(a.cohort.schema) == write_schema_json(b.cohort.schema));
    CHECK(write_triplets_csv(a.cohort) == write_triplets_csv(b.cohort));
    CHECK(write_labels_csv(*a.cohort.labels) == write_labels_csv(*b.cohort.labels));
    CHECK(provenance_json(cfg, a) == provenance_json(cfg, b));

    cfg.seed = 10;
    SynthResult c = generate_full(cfg);
    CHECK_FALSE(a.cohort == c.cohort);
}

TEST_CASE("schema lists numerics, then binaries, then categoricals") {
    Cohort c = generate(small_config());
    REQUIRE(c.schema.n_features() == 11);
    CHECK(c.schema.at(0).name == "num_0");
    CHECK(c.schema.at(0).kind == FeatureKind::Numeric);
    CHECK(c.schema.at(6).name == "bin_0");
    CHECK(c.schema.at(9).name == "cat_0");
    CHECK(c.schema.at(9).categories == std::vector<std::string>{"c0", "c1", "c2"});
}

TEST_CASE("realized prevalence lands within the calibration window") {
    SynthConfig cfg;  // defaults: n=648, target 1/3
    SynthResult res = generate_full(cfg);
    CHECK(std::fabs(res.realized_prevalence - 1.0 / 3.0) <= 0.02);

    double mean = 0.0;
    for (int y : *res.cohort.labels) mean += y;
    mean /= cfg.n_patients;
    CHECK(mean == res.realized_prevalence);
}

TEST_CASE("coefficients put the signal on the first half of the numerics") {
    SynthConfig cfg = small_config();
    cfg.signal_strength = 1.5;
    SynthResult res = generate_full(cfg);
    REQUIRE(res.coefficients.size() == 6);
    for (int j = 0; j < 3; ++j) CHECK(res.coefficients[static_cast<std::size_t>(j)] == 1.5);
    for (int j = 3; j < 6; ++j) CHECK(res.coefficients[static_cast<std::size_t>(j)] == 0.0);

    cfg.signal_strength = 0.0;  // pure-noise cohort still calibrates
    SynthResult null = generate_full(cfg);
    for (double b : null.coefficients) CHECK(b == 0.0);
    CHECK(std::fabs(null.realized_prevalence - 1.0 / 3.0) <= 0.02);
}

TEST_CASE("zero missingness emits every triplet exactly once") {
    SynthConfig cfg = small_config();
    cfg.missing_rate = 0.0;
    Cohort c = generate(cfg);
    CHECK(static_cast<int>(c.triplets.size()) == cfg.n_patients * 11);

    std::vector<int> per_patient(static_cast<std::size_t>(cfg.n_patients), 0);
    for (const Triplet& t : c.triplets) {
        CHECK_FALSE(t.value.is_missing());
        per_patient[static_cast<std::size_t>(t.patient_id)]++;
    }
    for (int n : per_patient) CHECK(n == 11);
}

TEST_CASE("masking hits the configured rate and spares categoricals") {
    SynthConfig cfg;
    cfg.n_patients = 400;
    cfg.n_numeric = 10;
    cfg.n_binary = 5;
    cfg.n_categorical = 2;
    cfg.missing_rate = 0.2;
    cfg.seed = 4;
    Cohort c = generate(cfg);

    int non_cat = 0, cat = 0;
    for (const Triplet& t : c.triplets)
        (t.value.tag == RawValue::Tag::Token ? cat : non_cat)++;
    CHECK(cat == cfg.n_patients * cfg.n_categorical);

    double kept = static_cast<double>(non_cat) / (400.0 * 15.0);
    CHECK(std::fabs(kept - 0.8) <= 0.02);
}

TEST_CASE("masking removes values without changing the surviving ones") {
    SynthConfig full_cfg = small_config();
    full_cfg.missing_rate = 0.0;
    SynthConfig masked_cfg = small_config();
    masked_cfg.missing_rate = 0.3;

    SynthResult full = generate_full(full_cfg);
    SynthResult masked = generate_full(masked_cfg);
    CHECK(*full.cohort.labels == *masked.cohort.labels);
    CHECK(full.intercept == masked.intercept);

    std::map<std::pair<int, int>, RawValue> lookup;
    for (const Triplet& t : full.cohort.triplets) lookup[{t.patient_id, t.feature_id}] = t.value;
    CHECK(masked.cohort.triplets.size() < full.cohort.triplets.size());
    for (const Triplet& t : masked.cohort.triplets) {
        auto it = lookup.find({t.patient_id, t.feature_id});
        REQUIRE(it != lookup.end());
        CHECK(it->second == t.value);
    }
}

TEST_CASE("unreachable prevalence fails loudly") {
    SynthConfig cfg;
    cfg.n_patients = 5;  // granularity 0.2 cannot hit 1/3 +- 0.02
    cfg.n_numeric = 2;
    cfg.n_binary = 0;
    cfg.n_categorical = 0;
    CHECK_THROWS_AS(generate_full(cfg), NumericError);
}

TEST_CASE("config validation rejects nonsense") {
    SynthConfig cfg;
    cfg.prevalence = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SynthConfig{};
    cfg.prevalence = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SynthConfig{};
    cfg.missing_rate = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SynthConfig{};
    cfg.n_patients = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SynthConfig{};
    cfg.n_numeric = cfg.n_binary = cfg.n_categorical = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SynthConfig{};
    cfg.n_categories = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = SynthConfig{};
    cfg.noise_std = -0.5;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_NOTHROW(SynthConfig{}.validate());
}

TEST_CASE("provenance JSON carries the config and calibration outcome") {
    SynthConfig cfg = small_config();
    SynthResult res = generate_full(cfg);
    auto doc = nlohmann::json::parse(provenance_json(cfg, res));
    CHECK(doc["config"]["n_patients"] == 120);
    CHECK(doc["config"]["seed"] == 9);
    CHECK(doc["config"]["missing_rate"].get<double>() == doctest::Approx(0.2));
    CHECK(doc["coefficients"].size() == 6);
    CHECK(doc["coefficients"][0].get<double>() == 1.5);
    CHECK(doc["intercept"].get<double>() == res.intercept);
    CHECK(doc["realized_prevalence"].get<double>() == res.realized_prevalence);
}
