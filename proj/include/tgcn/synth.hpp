#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tgcn/schema.hpp"

namespace tgcn {

struct SynthConfig {
    int n_patients = 648;
    int n_numeric = 20;
    int n_binary = 6;
    int n_categorical = 2;
    int n_categories = 3;       // levels per categorical feature
    double prevalence = 1.0 / 3.0;
    double signal_strength = 1.5;  // coefficient on informative numeric features
    double missing_rate = 0.2;     // MCAR, non-categorical values only
    double noise_std = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SynthResult {
    Cohort cohort;
    std::vector<double> coefficients;  // per numeric feature
    double intercept = 0.0;            // calibrated to the target prevalence
    double realized_prevalence = 0.0;
};

// Latent logistic model: the first ceil(n_numeric/2) numeric features carry
// coefficient signal_strength, everything else is noise. Labels are drawn once
// per patient; the intercept is then bisected against those draws until the
// realized prevalence lands within +-0.02 of the target.
SynthResult generate_full(const SynthConfig& config);

Cohort generate(const SynthConfig& config);

// Config + true coefficients + calibration outcome, for the provenance file.
std::string provenance_json(const SynthConfig& config, const SynthResult& result);

}  // namespace tgcn
