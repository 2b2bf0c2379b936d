#include "tgcn/model.hpp"

#include <algorithm>
#include <cmath>

#include "tgcn/rng.hpp"
#include "tgcn/util.hpp"

namespace tgcn {

ModelDims ModelDims::from_schema(const FeatureSchema& schema, int d) {
    if (d < 1) throw ConfigError("hidden size d must be >= 1");
    ModelDims dims;
    dims.d = d;
    dims.mlp_hidden = (d + 1) / 2;  // shallow MLP, width d/2 rounded up
    for (int fid : schema.categorical_ids())
        dims.cat_cardinalities.push_back(
            static_cast<int>(schema.at(fid).categories.size()));
    return dims;
}

ModelParams ModelParams::zeros_like(const ModelDims& dims, int n_feature_nodes) {
    ModelParams p;
    p.dims = dims;
    p.Z = Matrix(n_feature_nodes, dims.feat_embed);
    p.Psi_W = Matrix(dims.feat_embed, dims.d);
    p.Psi_b = Matrix(1, dims.d);
    for (int card : dims.cat_cardinalities) p.E.push_back(Matrix(card, dims.cat_embed));
    p.Phi_W = Matrix(dims.patient_input_width(), dims.d);
    p.Phi_b = Matrix(1, dims.d);
    p.W0 = Matrix(dims.d, dims.d);
    p.W1 = Matrix(dims.d, dims.d);
    p.M1_W = Matrix(dims.d, dims.mlp_hidden);
    p.M1_b = Matrix(1, dims.mlp_hidden);
    p.M2_W = Matrix(dims.mlp_hidden, 1);
    p.M2_b = Matrix(1, 1);
    return p;
}

bool ModelParams::operator==(const ModelParams& o) const {
    bool eq = E.size() == o.E.size();
    if (!eq) return false;
    for (std::size_t k = 0; k < E.size(); ++k) eq = eq && E[k] == o.E[k];
    return eq && Z == o.Z && Psi_W == o.Psi_W && Psi_b == o.Psi_b && Phi_W == o.Phi_W &&
           Phi_b == o.Phi_b && W0 == o.W0 && W1 == o.W1 && M1_W == o.M1_W && M1_b == o.M1_b &&
           M2_W == o.M2_W && M2_b == o.M2_b;
}

namespace {

void glorot_fill(Matrix& m, Rng& rng) {
    double bound = std::sqrt(6.0 / (m.rows + m.cols));
    for (double& v : m.a) v = rng.uniform(-bound, bound);
}

double leaky(double x, double slope) { return leaky_relu(x, slope); }

void check_finite(const Matrix& m, const char* tag) {
    if (!all_finite(m)) throw NumericError(std::string("forward: non-finite values in ") + tag);
}

}  // namespace

ModelParams init_params(const ModelDims& dims, int n_feature_nodes, std::uint64_t seed) {
    ModelParams p = ModelParams::zeros_like(dims, n_feature_nodes);
    Rng rng(seed);
    // Fixed draw order; biases stay zero and consume no randomness.
    glorot_fill(p.Z, rng);
    glorot_fill(p.Psi_W, rng);
    for (Matrix& e : p.E) glorot_fill(e, rng);
    glorot_fill(p.Phi_W, rng);
    glorot_fill(p.W0, rng);
    glorot_fill(p.W1, rng);
    glorot_fill(p.M1_W, rng);
    glorot_fill(p.M2_W, rng);
    return p;
}

std::array<double, 4> patient_summary(const ProcessedCohort& processed, int patient) {
    const int K = processed.n_edge_features();
    if (K == 0) {
        warn("patient " + std::to_string(patient) + " has no incident edges; zero summary");
        return {0.0, 0.0, 0.0, 0.0};
    }
    double sum = 0.0;
    double mx = processed.v(patient, 0), mn = processed.v(patient, 0);
    for (int j = 0; j < K; ++j) {
        double v = processed.v(patient, j);
        sum += v;
        mx = std::max(mx, v);
        mn = std::min(mn, v);
    }
    double mean = sum / K;
    double ss = 0.0;
    for (int j = 0; j < K; ++j) {
        double dv = processed.v(patient, j) - mean;
        ss += dv * dv;
    }
    return {mean, mx, mn, ss / K};
}

Matrix init_node_matrix(const ProcessedCohort& processed, const ModelParams& params) {
    const ModelDims& dims = params.dims;
    const int N = processed.n_patients;
    const int K = processed.n_edge_features();
    if (params.Z.rows != K)
        throw NumericError("init_node_matrix: Z rows do not match feature node count");
    if (static_cast<int>(params.E.size()) != processed.n_cat_features())
        throw NumericError("init_node_matrix: embedding table count mismatch");

    Matrix H0(N + K, dims.d);
    // Patient rows: Phi([s_i || e_1(c_i1) || ...]) + bias.
    for (int i = 0; i < N; ++i) {
        std::array<double, 4> s = patient_summary(processed, i);
        std::vector<double> u(static_cast<std::size_t>(dims.patient_input_width()));
        for (int t = 0; t < 4; ++t) u[static_cast<std::size_t>(t)] = s[static_cast<std::size_t>(t)];
        for (int k = 0; k < dims.n_cat(); ++k) {
            int c = processed.cat(i, k);
            const Matrix& table = params.E[static_cast<std::size_t>(k)];
            if (c < 0 || c >= table.rows)
                throw DataError("init_node_matrix: categorical index out of range");
            for (int t = 0; t < dims.cat_embed; ++t)
                u[static_cast<std::size_t>(4 + k * dims.cat_embed + t)] = table(c, t);
        }
        double* out = H0.row(i);
        for (int j = 0; j < dims.d; ++j) out[j] = params.Phi_b(0, j);
        for (int t = 0; t < dims.patient_input_width(); ++t) {
            double ut = u[static_cast<std::size_t>(t)];
            if (ut == 0.0) continue;
            const double* wrow = params.Phi_W.row(t);
            for (int j = 0; j < dims.d; ++j) out[j] += ut * wrow[j];
        }
    }
    // Feature rows: Psi(z_f) + bias.
    for (int f = 0; f < K; ++f) {
        double* out = H0.row(N + f);
        for (int j = 0; j < dims.d; ++j) out[j] = params.Psi_b(0, j);
        const double* z = params.Z.row(f);
        for (int t = 0; t < dims.feat_embed; ++t) {
            const double* wrow = params.Psi_W.row(t);
            for (int j = 0; j < dims.d; ++j) out[j] += z[t] * wrow[j];
        }
    }
    return H0;
}

namespace {

// Inverted dropout: kept entries are scaled by 1/(1-rate) so eval mode needs
// no rescaling. rate == 0 consumes no randomness.
Matrix apply_dropout(const Matrix& x, double rate, Rng& rng, std::vector<std::uint8_t>& mask_out) {
    Matrix out = x;
    mask_out.assign(x.size(), 1);
    if (rate == 0.0) return out;
    double scale = 1.0 / (1.0 - rate);
    for (std::size_t i = 0; i < out.a.size(); ++i) {
        if (rng.uniform01() < rate) {
            mask_out[i] = 0;
            out.a[i] = 0.0;
        } else {
            out.a[i] *= scale;
        }
    }
    return out;
}

Matrix leaky_matrix(const Matrix& x, double slope) {
    Matrix out = x;
    for (double& v : out.a) v = leaky(v, slope);
    return out;
}

}  // namespace

ForwardTrace forward(const BipartiteGraph& graph, const ProcessedCohort& processed,
                     const ModelParams& params, const ForwardOptions& options) {
    const ModelDims& dims = params.dims;
    const int N = processed.n_patients;
    const int K = processed.n_edge_features();
    if (graph.n_patients != N || graph.n_feature_nodes != K)
        throw NumericError("forward: graph does not match processed cohort");
    if (options.dropout_rate < 0.0 || options.dropout_rate >= 1.0)
        throw ConfigError("dropout_rate must be in [0, 1)");

    const bool train = options.mode == ForwardMode::Train;
    const double rate = train ? options.dropout_rate : 0.0;
    Rng rng(options.rng_seed);

    ForwardTrace trace;
    trace.options = options;
    trace.options.dropout_rate = rate;

    trace.S = Matrix(N, 4);
    for (int i = 0; i < N; ++i) {
        std::array<double, 4> s = patient_summary(processed, i);
        for (int t = 0; t < 4; ++t) trace.S(i, t) = s[static_cast<std::size_t>(t)];
    }
    trace.U = Matrix(N, dims.patient_input_width());
    for (int i = 0; i < N; ++i) {
        for (int t = 0; t < 4; ++t) trace.U(i, t) = trace.S(i, t);
        for (int k = 0; k < dims.n_cat(); ++k) {
            int c = processed.cat(i, k);
            for (int t = 0; t < dims.cat_embed; ++t)
                trace.U(i, 4 + k * dims.cat_embed + t) = params.E[static_cast<std::size_t>(k)](c, t);
        }
    }

    trace.H0 = init_node_matrix(processed, params);
    check_finite(trace.H0, "H0");

    // Layer 1: H1 = dropout(leakyrelu(A_norm H0 W0)).
    trace.P0 = spmm(graph.adjacency_norm, trace.H0);
    trace.Zpre1 = matmul(trace.P0, params.W0);
    Matrix a1 = leaky_matrix(trace.Zpre1, options.leaky_slope);
    if (train) {
        trace.H1 = apply_dropout(a1, rate, rng, trace.mask1);
    } else {
        trace.H1 = std::move(a1);
    }
    check_finite(trace.H1, "H1");

    // Layer 2 with residual: H2 = dropout(leakyrelu(A_norm H1 W1)) + H1.
    trace.P1 = spmm(graph.adjacency_norm, trace.H1);
    trace.Zpre2 = matmul(trace.P1, params.W1);
    Matrix a2 = leaky_matrix(trace.Zpre2, options.leaky_slope);
    if (train) {
        trace.H2 = apply_dropout(a2, rate, rng, trace.mask2);
    } else {
        trace.H2 = std::move(a2);
    }
    add_inplace(trace.H2, trace.H1);
    check_finite(trace.H2, "H2");

    // MLP head over patient rows.
    trace.G1 = Matrix(N, dims.mlp_hidden);
    trace.R1 = Matrix(N, dims.mlp_hidden);
    trace.logits.assign(static_cast<std::size_t>(N), 0.0);
    trace.probs.assign(static_cast<std::size_t>(N), 0.0);
    for (int i = 0; i < N; ++i) {
        const double* h = trace.H2.row(i);
        for (int j = 0; j < dims.mlp_hidden; ++j) {
            double g = params.M1_b(0, j);
            for (int t = 0; t < dims.d; ++t) g += h[t] * params.M1_W(t, j);
            trace.G1(i, j) = g;
            trace.R1(i, j) = leaky(g, options.leaky_slope);
        }
        double z = params.M2_b(0, 0);
        for (int j = 0; j < dims.mlp_hidden; ++j) z += trace.R1(i, j) * params.M2_W(j, 0);
        if (!std::isfinite(z)) throw NumericError("forward: non-finite values in logits");
        trace.logits[static_cast<std::size_t>(i)] = z;
        trace.probs[static_cast<std::size_t>(i)] = sigmoid_strict(z);
    }
    return trace;
}

}  // namespace tgcn
