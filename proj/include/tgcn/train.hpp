#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tgcn/graph.hpp"
#include "tgcn/model.hpp"
#include "tgcn/preprocess.hpp"
#include "tgcn/schema.hpp"

namespace tgcn {

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 300;
    double gamma = 2.0;            // focal focusing exponent
    double alpha = 0.25;           // focal class weight
    double dropout_rate = 0.5;
    double leaky_slope = 0.01;
    std::uint64_t seed = 0;
    double grad_clip = 5.0;        // global L2 cap on gradients; <= 0 disables
    int early_stop_patience = 50;  // epochs without val-loss improvement
    double miss_weight = 0.5;      // edge weight scale for imputed values
    int hidden_dim = 64;
    bool symmetric_alpha = true;   // negatives weighted by 1-alpha
    bool inductive = false;        // train on a graph over train+val patients only
    bool stats_after_impute = false;
    bool literal_degrees = false;

    void validate() const;
};

struct BackwardResult {
    double loss = 0.0;
    Gradients grads;
};

// Exact reverse-mode pass: focal loss and its derivative w.r.t. every
// parameter, replaying the forward trace in reverse. Dropout masks recorded in
// the trace are treated as constants; labels use -1 to exclude a patient.
BackwardResult backward(const ForwardTrace& trace, const BipartiteGraph& graph,
                        const ProcessedCohort& processed, const ModelParams& params,
                        const std::vector<int>& labels, const TrainConfig& config);

struct AdamState {
    ModelParams m, v;  // first/second moment mirrors
    long long t = 0;
    double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;

    static AdamState init(const ModelParams& shape);
};

// In-place Adam update with bias correction. grad_clip <= 0 disables clipping.
void adam_step(ModelParams& params, const Gradients& grads, AdamState& state, double lr,
               double grad_clip);

double gradient_global_norm(const Gradients& grads);

struct EpochRecord {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;  // NaN when no validation split
    double val_auc = 0.0;   // NaN when undefined
};

struct TrainingHistory {
    std::vector<EpochRecord> rows;
    int best_epoch = -1;  // epoch of the returned parameters; -1 = initial params

    std::string to_csv() const;  // epoch,train_loss,val_loss,val_auc (NaN -> NA)
};

struct TrainResult {
    ModelParams params;      // best validation loss (final params without a val split)
    PreprocessStats stats;   // fitted on the training split
    TrainingHistory history;
};

// Full-batch training. Labels of patients outside train_idx never enter the
// loss; val_idx drives early stopping. Transductive by default (one graph over
// the whole cohort); config.inductive restricts the training graph to
// train+val patients.
TrainResult train(const Cohort& cohort, const std::vector<int>& train_idx,
                  const std::vector<int>& val_idx, const TrainConfig& config);

}  // namespace tgcn
