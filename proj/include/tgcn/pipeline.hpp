#pragma once

#include <vector>

#include "tgcn/config.hpp"
#include "tgcn/metrics.hpp"
#include "tgcn/schema.hpp"
#include "tgcn/train.hpp"

namespace tgcn {

// One full experiment: stratified test split, validation carve-out, training,
// full-cohort inference, and matched GCN/KNN test reports.
struct ExperimentResult {
    std::vector<int> train_idx, val_idx, test_idx;
    TrainResult trained;
    std::vector<double> probs;        // full cohort, eval mode
    std::vector<double> test_scores;  // probs at test_idx
    std::vector<int> test_labels;
    MetricsReport gcn;
    MetricsReport knn;
};

ExperimentResult run_experiment(const Cohort& cohort, const PipelineConfig& config);

// The outer test carve-out and the bootstrap stream seed, shared by every
// command so GCN and baseline reports stay comparable.
SplitResult experiment_split(const std::vector<int>& labels, const PipelineConfig& config);
std::uint64_t bootstrap_seed(const PipelineConfig& config);

// Eval-mode probabilities for every patient under frozen stats and weights.
std::vector<double> predict_probs(const Cohort& cohort, const PreprocessStats& stats,
                                  const ModelParams& params, const TrainConfig& config);

}  // namespace tgcn
