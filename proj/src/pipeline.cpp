#include "tgcn/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "tgcn/baseline.hpp"
#include "tgcn/graph.hpp"
#include "tgcn/util.hpp"

namespace tgcn {

namespace {

// Sub-seed tags for the pipeline-level draws.
enum SeedTag : std::uint64_t { kTestSplit = 11, kValSplit = 12, kBootstrap = 13 };

std::vector<double> pick(const std::vector<double>& xs, const std::vector<int>& idx) {
    std::vector<double> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(xs[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<int> pick(const std::vector<int>& xs, const std::vector<int>& idx) {
    std::vector<int> out;
    out.reserve(idx.size());
    for (int i : idx) out.push_back(xs[static_cast<std::size_t>(i)]);
    return out;
}

double choose_threshold(const PipelineConfig& config, const std::vector<double>& val_scores,
                        const std::vector<int>& val_labels) {
    if (config.threshold_mode != "youden") return config.threshold;
    bool has_pos = false, has_neg = false;
    for (int y : val_labels) (y == 1 ? has_pos : has_neg) = true;
    if (val_labels.empty() || !has_pos || !has_neg) {
        warn("youden threshold needs a two-class validation split; using " +
             format_shortest(config.threshold));
        return config.threshold;
    }
    return youden_threshold(val_scores, val_labels);
}

}  // namespace

SplitResult experiment_split(const std::vector<int>& labels, const PipelineConfig& config) {
    return stratified_split(labels, config.test_fraction, mix_seed(config.train.seed, kTestSplit));
}

std::uint64_t bootstrap_seed(const PipelineConfig& config) {
    return mix_seed(config.train.seed, kBootstrap);
}

std::vector<double> predict_probs(const Cohort& cohort, const PreprocessStats& stats,
                                  const ModelParams& params, const TrainConfig& config) {
    ProcessedCohort processed = transform(cohort, stats);
    BipartiteGraph graph = build_graph(processed, config.miss_weight, config.literal_degrees);
    ForwardOptions opt;
    opt.mode = ForwardMode::Eval;
    opt.dropout_rate = 0.0;
    opt.leaky_slope = config.leaky_slope;
    return forward(graph, processed, params, opt).probs;
}

ExperimentResult run_experiment(const Cohort& cohort, const PipelineConfig& config) {
    config.validate();
    if (!cohort.labels) throw DataError("experiment: cohort has no labels");
    const std::vector<int>& labels = *cohort.labels;
    const std::uint64_t seed = config.train.seed;

    ExperimentResult res;
    SplitResult outer = experiment_split(labels, config);
    res.test_idx = outer.test_idx;
    if (config.val_fraction > 0.0) {
        // Stratify the validation carve-out within the training pool.
        std::vector<int> pool_labels = pick(labels, outer.train_idx);
        SplitResult inner =
            stratified_split(pool_labels, config.val_fraction, mix_seed(seed, kValSplit));
        res.train_idx = pick(outer.train_idx, inner.train_idx);
        res.val_idx = pick(outer.train_idx, inner.test_idx);
    } else {
        res.train_idx = outer.train_idx;
    }

    res.trained = train(cohort, res.train_idx, res.val_idx, config.train);

    res.probs = predict_probs(cohort, res.trained.stats, res.trained.params, config.train);
    res.test_scores = pick(res.probs, res.test_idx);
    res.test_labels = pick(labels, res.test_idx);

    std::vector<double> val_scores = pick(res.probs, res.val_idx);
    std::vector<int> val_labels = pick(labels, res.val_idx);
    double gcn_threshold = choose_threshold(config, val_scores, val_labels);
    res.gcn = evaluate(res.test_scores, res.test_labels, gcn_threshold, config.n_boot,
                       bootstrap_seed(config));

    // KNN sees the identical processed design; all non-test labels are its
    // neighbor pool (it has no use for a held-out validation set).
    ProcessedCohort processed = transform(cohort, res.trained.stats);
    DenseDesign design = densify(processed);
    std::vector<int> pool = res.train_idx;
    pool.insert(pool.end(), res.val_idx.begin(), res.val_idx.end());
    std::sort(pool.begin(), pool.end());
    DenseDesign train_design = design_rows(design, pool);
    std::vector<int> pool_y = pick(labels, pool);
    DenseDesign test_design = design_rows(design, res.test_idx);
    std::vector<double> knn_scores = knn_score(train_design, pool_y, test_design, config.knn_k);

    // Threshold selection mirrors the GCN: picked on validation scores.
    std::vector<double> knn_val_scores;
    if (config.threshold_mode == "youden" && !res.val_idx.empty() && !res.train_idx.empty()) {
        DenseDesign fit_design = design_rows(design, res.train_idx);
        std::vector<int> fit_y = pick(labels, res.train_idx);
        int k = std::min(config.knn_k, static_cast<int>(res.train_idx.size()));
        knn_val_scores = knn_score(fit_design, fit_y, design_rows(design, res.val_idx), k);
    }
    double knn_threshold = choose_threshold(config, knn_val_scores, val_labels);
    res.knn = evaluate(knn_scores, res.test_labels, knn_threshold, config.n_boot,
                       bootstrap_seed(config));
    return res;
}

}  // namespace tgcn
