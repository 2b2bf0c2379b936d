#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tgcn/graph.hpp"
#include "tgcn/matrix.hpp"
#include "tgcn/preprocess.hpp"

namespace tgcn {

struct ModelDims {
    int d = 64;           // GCN hidden size
    int feat_embed = 32;  // feature-node embedding width
    int cat_embed = 4;    // per categorical feature
    int mlp_hidden = 32;  // MLP hidden width, defaults to ceil(d/2)
    std::vector<int> cat_cardinalities;  // |C_k| per categorical feature

    int n_cat() const { return static_cast<int>(cat_cardinalities.size()); }
    int patient_input_width() const { return 4 + cat_embed * n_cat(); }

    static ModelDims from_schema(const FeatureSchema& schema, int d);
};

// All trainable tensors. Biases are 1-row matrices; the fixed traversal order
// of for_each_tensor is also the checkpoint block order.
struct ModelParams {
    ModelDims dims;
    Matrix Z;               // K x feat_embed, feature-node embeddings
    Matrix Psi_W, Psi_b;    // feat_embed x d, 1 x d
    std::vector<Matrix> E;  // per categorical feature: |C_k| x cat_embed
    Matrix Phi_W, Phi_b;    // patient_input_width x d, 1 x d
    Matrix W0, W1;          // d x d, no bias
    Matrix M1_W, M1_b;      // d x mlp_hidden, 1 x mlp_hidden
    Matrix M2_W, M2_b;      // mlp_hidden x 1, 1 x 1

    static ModelParams zeros_like(const ModelDims& dims, int n_feature_nodes);

    template <typename Fn>  // Fn(const char* name, Matrix&)
    void for_each_tensor(Fn&& fn) {
        fn("Z", Z);
        fn("Psi_W", Psi_W);
        fn("Psi_b", Psi_b);
        for (std::size_t k = 0; k < E.size(); ++k) fn(("E" + std::to_string(k)).c_str(), E[k]);
        fn("Phi_W", Phi_W);
        fn("Phi_b", Phi_b);
        fn("W0", W0);
        fn("W1", W1);
        fn("M1_W", M1_W);
        fn("M1_b", M1_b);
        fn("M2_W", M2_W);
        fn("M2_b", M2_b);
    }
    template <typename Fn>
    void for_each_tensor(Fn&& fn) const {
        const_cast<ModelParams*>(this)->for_each_tensor(
            [&](const char* name, Matrix& m) { fn(name, static_cast<const Matrix&>(m)); });
    }

    bool operator==(const ModelParams& o) const;
};

using Gradients = ModelParams;  // same shapes, holds d(loss)/d(param)

// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases;
// deterministic in (dims, n_feature_nodes, seed).
ModelParams init_params(const ModelDims& dims, int n_feature_nodes, std::uint64_t seed);

// [mean, max, min, population variance] over the patient's processed values.
std::array<double, 4> patient_summary(const ProcessedCohort& processed, int patient);

// Patient rows: Phi([s_i || e_1(c_i1) || ... ]); feature rows: Psi(z_f).
Matrix init_node_matrix(const ProcessedCohort& processed, const ModelParams& params);

enum class ForwardMode { Train, Eval };

inline double leaky_relu(double x, double slope) { return x > 0.0 ? x : slope * x; }
inline double leaky_relu_grad(double x, double slope) { return x > 0.0 ? 1.0 : slope; }

// Sigmoid clamped into the open interval (probabilities must stay strictly
// inside (0,1) for the log-space loss).
inline double sigmoid_strict(double z) {
    double p = 1.0 / (1.0 + std::exp(-z));
    if (p < 1e-12) p = 1e-12;
    if (p > 1.0 - 1e-12) p = 1.0 - 1e-12;
    return p;
}

struct ForwardOptions {
    ForwardMode mode = ForwardMode::Eval;
    double dropout_rate = 0.5;
    double leaky_slope = 0.01;
    std::uint64_t rng_seed = 0;  // consumed only in train mode with rate > 0
};

// Everything backward needs, kept by value; eval-mode traces hold no masks.
struct ForwardTrace {
    Matrix S;   // N x 4 summary stats (constants w.r.t. parameters)
    Matrix U;   // N x patient_input_width, Phi input
    Matrix H0;  // (N+K) x d
    Matrix P0, Zpre1, H1;  // aggregation, pre-activation, layer-1 output
    Matrix P1, Zpre2, H2;  // second layer; H2 includes the residual
    Matrix G1, R1;         // MLP hidden pre/post activation (patients only)
    std::vector<double> logits, probs;      // length N
    std::vector<std::uint8_t> mask1, mask2; // dropout keep masks, train mode only
    ForwardOptions options;
};

ForwardTrace forward(const BipartiteGraph& graph, const ProcessedCohort& processed,
                     const ModelParams& params, const ForwardOptions& options);

}  // namespace tgcn
