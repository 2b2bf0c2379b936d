#pragma once

#include <cstdint>
#include <string>

#include "tgcn/synth.hpp"
#include "tgcn/train.hpp"

namespace tgcn {

// Everything the CLI can steer, read from a flat key=value file. One `seed`
// key feeds both the generator and the trainer; command-line flags override.
struct PipelineConfig {
    TrainConfig train;
    SynthConfig synth;
    double test_fraction = 0.3;
    double val_fraction = 0.15;  // carved from the training portion
    std::string threshold_mode = "fixed";  // or "youden" (picked on validation)
    double threshold = 0.5;
    int knn_k = 5;
    int n_boot = 2000;
    bool deterministic = false;  // freezes checkpoint timestamps

    void set_seed(std::uint64_t seed);
    void validate() const;
};

// `key = value` lines; '#' comments; unknown keys are errors, later keys win.
PipelineConfig parse_config(const std::string& text);
PipelineConfig parse_config(const std::string& text, const PipelineConfig& base);

// Every key at its current value, parseable by parse_config.
std::string write_config(const PipelineConfig& config);

}  // namespace tgcn
