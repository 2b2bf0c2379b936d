#include "tgcn/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "tgcn/loss.hpp"
#include "tgcn/metrics.hpp"
#include "tgcn/sparse.hpp"
#include "tgcn/util.hpp"

namespace tgcn {

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be > 0");
    if (epochs < 0) throw ConfigError("epochs must be >= 0");
    if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in (0,1]");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0) throw ConfigError("dropout_rate must be in [0,1)");
    if (!(leaky_slope >= 0.0)) throw ConfigError("leaky_slope must be >= 0");
    if (early_stop_patience < 0) throw ConfigError("early_stop_patience must be >= 0");
    if (miss_weight < 0.0 || miss_weight > 1.0) throw ConfigError("miss_weight must be in [0,1]");
    if (hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
}

namespace {

// Sub-seed tags: parameter init uses tag 0, epoch e's dropout uses tag 1+e.
constexpr std::uint64_t kSeedParams = 0;

std::uint64_t dropout_seed(std::uint64_t seed, int epoch) {
    return mix_seed(seed, 1 + static_cast<std::uint64_t>(epoch));
}

}  // namespace

BackwardResult backward(const ForwardTrace& trace, const BipartiteGraph& graph,
                        const ProcessedCohort& processed, const ModelParams& params,
                        const std::vector<int>& labels, const TrainConfig& config) {
    const ModelDims& dims = params.dims;
    const int N = graph.n_patients;
    const int K = graph.n_feature_nodes;
    const int T = graph.n_nodes();
    const int d = dims.d;
    const int mh = dims.mlp_hidden;
    const double slope = trace.options.leaky_slope;
    const double rate = trace.options.dropout_rate;

    if (trace.options.mode != ForwardMode::Train)
        throw ConfigError("backward: requires a train-mode forward trace");
    if (processed.n_patients != N || processed.n_edge_features() != K)
        throw NumericError("backward: processed cohort does not match graph");
    if (trace.H0.rows != T || trace.H0.cols != d || params.Z.rows != K ||
        trace.U.cols != dims.patient_input_width() ||
        static_cast<int>(trace.probs.size()) != N)
        throw NumericError("backward: trace/params mismatch");
    if (trace.mask1.size() != trace.H1.size() || trace.mask2.size() != trace.H2.size())
        throw NumericError("backward: trace missing dropout masks");

    BackwardResult out;
    out.loss = focal_loss(trace.probs, labels, config.alpha, config.gamma, config.symmetric_alpha);
    std::vector<double> dlogits =
        focal_grad(trace.probs, labels, config.alpha, config.gamma, config.symmetric_alpha);

    Gradients g = ModelParams::zeros_like(dims, K);

    // MLP head.
    Matrix dH2(T, d);
    for (int i = 0; i < N; ++i) {
        double dz = dlogits[static_cast<std::size_t>(i)];
        if (dz == 0.0) continue;  // excluded rows contribute nothing
        g.M2_b(0, 0) += dz;
        const double* h2 = trace.H2.row(i);
        double* dh2 = dH2.row(i);
        for (int j = 0; j < mh; ++j) {
            g.M2_W(j, 0) += dz * trace.R1(i, j);
            double dgj = dz * params.M2_W(j, 0) * leaky_relu_grad(trace.G1(i, j), slope);
            if (dgj == 0.0) continue;
            g.M1_b(0, j) += dgj;
            for (int t = 0; t < d; ++t) {
                g.M1_W(t, j) += h2[t] * dgj;
                dh2[t] += dgj * params.M1_W(t, j);
            }
        }
    }

    // Layer 2: H2 = dropout(leaky(Zpre2)) + H1.
    const double keep_scale = rate > 0.0 ? 1.0 / (1.0 - rate) : 1.0;
    Matrix dZpre2(T, d);
    for (std::size_t idx = 0; idx < dZpre2.a.size(); ++idx) {
        double up = trace.mask2[idx] ? dH2.a[idx] * keep_scale : 0.0;
        dZpre2.a[idx] = up * leaky_relu_grad(trace.Zpre2.a[idx], slope);
    }
    g.W1 = matmul_tn(trace.P1, dZpre2);
    Matrix dP1 = matmul_nt(dZpre2, params.W1);
    Matrix dH1 = spmm(graph.adjacency_norm, dP1);  // A_norm is symmetric
    add_inplace(dH1, dH2);                         // residual path

    // Layer 1: H1 = dropout(leaky(Zpre1)).
    Matrix dZpre1(T, d);
    for (std::size_t idx = 0; idx < dZpre1.a.size(); ++idx) {
        double up = trace.mask1[idx] ? dH1.a[idx] * keep_scale : 0.0;
        dZpre1.a[idx] = up * leaky_relu_grad(trace.Zpre1.a[idx], slope);
    }
    g.W0 = matmul_tn(trace.P0, dZpre1);
    Matrix dP0 = matmul_nt(dZpre1, params.W0);
    Matrix dH0 = spmm(graph.adjacency_norm, dP0);

    // Node initializers. Patient rows: H0_i = Phi_W^T u_i + Phi_b; summary
    // entries of u are data constants, embedding entries route into E_k.
    for (int i = 0; i < N; ++i) {
        const double* dh = dH0.row(i);
        for (int j = 0; j < d; ++j) g.Phi_b(0, j) += dh[j];
        for (int t = 0; t < dims.patient_input_width(); ++t) {
            double ut = trace.U(i, t);
            if (ut == 0.0) continue;
            double* gw = g.Phi_W.row(t);
            for (int j = 0; j < d; ++j) gw[j] += ut * dh[j];
        }
        for (int k = 0; k < dims.n_cat(); ++k) {
            int c = processed.cat(i, k);
            for (int t = 0; t < dims.cat_embed; ++t) {
                const double* wrow = params.Phi_W.row(4 + k * dims.cat_embed + t);
                double du = 0.0;
                for (int j = 0; j < d; ++j) du += dh[j] * wrow[j];
                g.E[static_cast<std::size_t>(k)](c, t) += du;
            }
        }
    }
    // Feature rows: H0_{N+f} = Psi_W^T z_f + Psi_b.
    for (int f = 0; f < K; ++f) {
        const double* dh = dH0.row(N + f);
        for (int j = 0; j < d; ++j) g.Psi_b(0, j) += dh[j];
        for (int t = 0; t < dims.feat_embed; ++t) {
            double zt = params.Z(f, t);
            double* gw = g.Psi_W.row(t);
            const double* wrow = params.Psi_W.row(t);
            double dz = 0.0;
            for (int j = 0; j < d; ++j) {
                gw[j] += zt * dh[j];
                dz += dh[j] * wrow[j];
            }
            g.Z(f, t) += dz;
        }
    }

    g.for_each_tensor([](const char* name, const Matrix& m) {
        if (!all_finite(m))
            throw NumericError(std::string("backward: non-finite gradient for ") + name);
    });
    out.grads = std::move(g);
    return out;
}

AdamState AdamState::init(const ModelParams& shape) {
    AdamState s;
    s.m = ModelParams::zeros_like(shape.dims, shape.Z.rows);
    s.v = ModelParams::zeros_like(shape.dims, shape.Z.rows);
    return s;
}

double gradient_global_norm(const Gradients& grads) {
    double ss = 0.0;
    grads.for_each_tensor([&](const char*, const Matrix& m) {
        for (double x : m.a) ss += x * x;
    });
    return std::sqrt(ss);
}

namespace {

std::vector<Matrix*> tensor_list(ModelParams& p) {
    std::vector<Matrix*> out;
    p.for_each_tensor([&](const char*, Matrix& m) { out.push_back(&m); });
    return out;
}

std::vector<const Matrix*> tensor_list(const ModelParams& p) {
    std::vector<const Matrix*> out;
    p.for_each_tensor([&](const char*, const Matrix& m) { out.push_back(&m); });
    return out;
}

}  // namespace

void adam_step(ModelParams& params, const Gradients& grads, AdamState& state, double lr,
               double grad_clip) {
    double scale = 1.0;
    if (grad_clip > 0.0) {
        double norm = gradient_global_norm(grads);
        if (norm > grad_clip) scale = grad_clip / norm;
    }
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));

    std::vector<Matrix*> tp = tensor_list(params);
    std::vector<const Matrix*> tg = tensor_list(grads);
    std::vector<Matrix*> tm = tensor_list(state.m);
    std::vector<Matrix*> tv = tensor_list(state.v);
    if (tp.size() != tg.size() || tp.size() != tm.size() || tp.size() != tv.size())
        throw NumericError("adam_step: parameter/gradient shape mismatch");

    for (std::size_t i = 0; i < tp.size(); ++i) {
        Matrix& p = *tp[i];
        const Matrix& gr = *tg[i];
        Matrix& m = *tm[i];
        Matrix& v = *tv[i];
        if (!p.same_shape(gr) || !p.same_shape(m) || !p.same_shape(v))
            throw NumericError("adam_step: parameter/gradient shape mismatch");
        for (std::size_t e = 0; e < p.a.size(); ++e) {
            double ge = gr.a[e] * scale;
            m.a[e] = state.beta1 * m.a[e] + (1.0 - state.beta1) * ge;
            v.a[e] = state.beta2 * v.a[e] + (1.0 - state.beta2) * ge * ge;
            double mhat = m.a[e] / bc1;
            double vhat = v.a[e] / bc2;
            p.a[e] -= lr * mhat / (std::sqrt(vhat) + state.eps);
        }
    }
}

std::string TrainingHistory::to_csv() const {
    std::string out = "epoch,train_loss,val_loss,val_auc\n";
    for (const EpochRecord& r : rows) {
        out += std::to_string(r.epoch);
        for (double v : {r.train_loss, r.val_loss, r.val_auc}) {
            out += ',';
            out += std::isnan(v) ? "NA" : format_shortest(v);
        }
        out += '\n';
    }
    return out;
}

namespace {

void check_split(const Cohort& cohort, const std::vector<int>& train_idx,
                 const std::vector<int>& val_idx) {
    if (!cohort.labels) throw DataError("train: cohort has no labels");
    if (train_idx.empty()) throw DataError("train: empty training split");
    std::unordered_set<int> seen;
    for (const std::vector<int>* part : {&train_idx, &val_idx}) {
        for (int i : *part) {
            if (i < 0 || i >= cohort.n_patients)
                throw DataError("train: split index " + std::to_string(i) + " out of range");
            if (!seen.insert(i).second)
                throw DataError("train: split index " + std::to_string(i) +
                                " appears more than once");
        }
    }
    int pos = 0, neg = 0;
    for (int i : train_idx) ((*cohort.labels)[static_cast<std::size_t>(i)] == 1 ? pos : neg)++;
    if (pos == 0) throw DataError("train: no positive labels in training split");
    if (neg == 0) throw DataError("train: no negative labels in training split");
}

}  // namespace

TrainResult train(const Cohort& cohort, const std::vector<int>& train_idx,
                  const std::vector<int>& val_idx, const TrainConfig& config) {
    config.validate();
    check_split(cohort, train_idx, val_idx);

    // Working cohort: everyone (transductive) or train+val only (inductive).
    Cohort working;
    std::vector<int> w_train, w_val;
    if (config.inductive) {
        std::vector<int> keep;
        keep.reserve(train_idx.size() + val_idx.size());
        keep.insert(keep.end(), train_idx.begin(), train_idx.end());
        keep.insert(keep.end(), val_idx.begin(), val_idx.end());
        std::sort(keep.begin(), keep.end());
        std::unordered_map<int, int> remap;
        for (std::size_t i = 0; i < keep.size(); ++i)
            remap[keep[i]] = static_cast<int>(i);
        working = subset_cohort(cohort, keep);
        for (int i : train_idx) w_train.push_back(remap.at(i));
        for (int i : val_idx) w_val.push_back(remap.at(i));
    } else {
        working = cohort;
        w_train = train_idx;
        w_val = val_idx;
    }

    TrainResult result;
    result.stats = fit(working, w_train, config.stats_after_impute);
    ProcessedCohort processed = transform(working, result.stats);
    BipartiteGraph graph = build_graph(processed, config.miss_weight, config.literal_degrees);

    ModelDims dims = ModelDims::from_schema(working.schema, config.hidden_dim);
    ModelParams params =
        init_params(dims, processed.n_edge_features(), mix_seed(config.seed, kSeedParams));
    AdamState state = AdamState::init(params);

    const std::vector<int>& y = *working.labels;
    std::vector<int> train_labels(static_cast<std::size_t>(working.n_patients), -1);
    std::vector<int> val_labels(static_cast<std::size_t>(working.n_patients), -1);
    for (int i : w_train) train_labels[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)];
    for (int i : w_val) val_labels[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)];

    result.params = params;
    double best_val = std::numeric_limits<double>::infinity();
    int since_best = 0;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        EpochRecord rec;
        rec.epoch = epoch;
        rec.val_loss = rec.val_auc = std::numeric_limits<double>::quiet_NaN();
        try {
            ForwardOptions opt;
            opt.mode = ForwardMode::Train;
            opt.dropout_rate = config.dropout_rate;
            opt.leaky_slope = config.leaky_slope;
            opt.rng_seed = dropout_seed(config.seed, epoch);
            ForwardTrace trace = forward(graph, processed, params, opt);
            BackwardResult back = backward(trace, graph, processed, params, train_labels, config);
            rec.train_loss = back.loss;
            adam_step(params, back.grads, state, config.learning_rate, config.grad_clip);
        } catch (const NumericError& e) {
            throw NumericError("train: diverged at epoch " + std::to_string(epoch) + ": " +
                               e.what());
        }

        if (!w_val.empty()) {
            ForwardOptions eopt;
            eopt.mode = ForwardMode::Eval;
            eopt.dropout_rate = 0.0;
            eopt.leaky_slope = config.leaky_slope;
            ForwardTrace etr = forward(graph, processed, params, eopt);
            rec.val_loss =
                focal_loss(etr.probs, val_labels, config.alpha, config.gamma, config.symmetric_alpha);
            std::vector<double> vs;
            std::vector<int> vy;
            for (int i : w_val) {
                vs.push_back(etr.probs[static_cast<std::size_t>(i)]);
                vy.push_back(y[static_cast<std::size_t>(i)]);
            }
            rec.val_auc = auc_or_nan(vs, vy);
        }
        result.history.rows.push_back(rec);

        if (!w_val.empty()) {
            if (rec.val_loss < best_val) {
                best_val = rec.val_loss;
                result.params = params;
                result.history.best_epoch = epoch;
                since_best = 0;
            } else if (config.early_stop_patience > 0 &&
                       ++since_best >= config.early_stop_patience) {
                break;
            }
        }
    }
    if (w_val.empty() && config.epochs > 0) {
        result.params = params;  // no validation signal: keep final weights
        result.history.best_epoch = config.epochs - 1;
    }
    return result;
}

}  // namespace tgcn
