#pragma once

// Reference implementations used as test oracles. Everything here is built
// from first principles (dense algebra, exhaustive enumeration, full sorts,
// finite differences) and shares no code path with the library internals it
// checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "tgcn/matrix.hpp"
#include "tgcn/model.hpp"
#include "tgcn/sparse.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const tgcn::SparseMatrix& A) {
    Dense out(static_cast<std::size_t>(A.n_rows),
              std::vector<double>(static_cast<std::size_t>(A.n_cols), 0.0));
    for (int r = 0; r < A.n_rows; ++r)
        for (std::int64_t e = A.row_offsets[r]; e < A.row_offsets[r + 1]; ++e)
            out[r][static_cast<std::size_t>(A.col_indices[static_cast<std::size_t>(e)])] =
                A.values[static_cast<std::size_t>(e)];
    return out;
}

inline Dense dense_from_matrix(const tgcn::Matrix& M) {
    Dense out(static_cast<std::size_t>(M.rows), std::vector<double>(static_cast<std::size_t>(M.cols)));
    for (int r = 0; r < M.rows; ++r)
        for (int c = 0; c < M.cols; ++c) out[r][c] = M(r, c);
    return out;
}

inline Dense dense_matmul(const Dense& A, const Dense& B) {
    std::size_t n = A.size(), m = B.empty() ? 0 : B[0].size(), k = B.size();
    Dense out(n, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            double acc = 0.0;
            for (std::size_t t = 0; t < k; ++t) acc += A[i][t] * B[t][j];
            out[i][j] = acc;
        }
    return out;
}

// Degrees as row sums of |A| (or of A when literal), floored like the library.
inline std::vector<double> degree_sums(const Dense& A, bool literal) {
    std::vector<double> deg(A.size(), 0.0);
    for (std::size_t r = 0; r < A.size(); ++r) {
        double s = 0.0;
        for (double v : A[r]) s += literal ? v : std::fabs(v);
        deg[r] = std::max(s, 1e-12);
    }
    return deg;
}

inline Dense normalize_dense(const Dense& A, const std::vector<double>& deg) {
    Dense out = A;
    for (std::size_t r = 0; r < A.size(); ++r)
        for (std::size_t c = 0; c < A[r].size(); ++c)
            out[r][c] = A[r][c] / (std::sqrt(deg[r]) * std::sqrt(deg[c]));
    return out;
}

// Spectral radius of a symmetric matrix: power iteration on A^2, which is
// PSD, so the +/- eigenvalue pairs of a bipartite spectrum cannot stall it.
inline double spectral_radius_symmetric(const Dense& A) {
    std::size_t n = A.size();
    if (n == 0) return 0.0;
    std::vector<double> x(n), y(n), z(n);
    std::uint64_t s = 0x9e3779b97f4a7c15ULL;  // fixed pseudo-random start
    for (std::size_t i = 0; i < n; ++i) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        x[i] = 0.5 + static_cast<double>(s >> 40) * 0x1.0p-24;
    }
    auto matvec = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += A[i][j] * in[j];
            out[i] = acc;
        }
    };
    double lambda2 = 0.0;
    for (int it = 0; it < 600; ++it) {
        matvec(x, y);
        matvec(y, z);  // z = A^2 x
        double xx = 0.0, xz = 0.0, nz = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            xx += x[i] * x[i];
            xz += x[i] * z[i];
            nz += z[i] * z[i];
        }
        if (nz == 0.0) return 0.0;  // A^2 x vanished; x was in the null space
        double next = xz / xx;
        double scale = 1.0 / std::sqrt(nz);
        for (std::size_t i = 0; i < n; ++i) x[i] = z[i] * scale;
        if (it > 10 && std::fabs(next - lambda2) <= 1e-14 * std::fabs(next)) {
            lambda2 = next;
            break;
        }
        lambda2 = next;
    }
    return std::sqrt(std::max(lambda2, 0.0));
}

// AUC by exhaustive pairwise comparison: concordant pairs count 1, ties 0.5.
inline double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    double num = 0.0;
    long long pos = 0, neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] == 1) ++pos;
        else ++neg;
    }
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            if (scores[i] > scores[j]) num += 1.0;
            else if (scores[i] == scores[j]) num += 0.5;
        }
    }
    return num / (static_cast<double>(pos) * static_cast<double>(neg));
}

inline double sorted_median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[(v.size() - 1) / 2];
}

// Exhaustive KNN: full sort of (squared distance, train index) pairs, so ties
// resolve toward the lower index exactly like the library contract.
inline std::vector<double> knn_scores(const Dense& train_x, const std::vector<int>& train_y,
                                      const Dense& test_x, int k) {
    std::vector<double> out;
    for (const auto& q : test_x) {
        std::vector<std::pair<double, int>> dist;
        for (std::size_t t = 0; t < train_x.size(); ++t) {
            double d2 = 0.0;
            for (std::size_t c = 0; c < q.size(); ++c) {
                double diff = q[c] - train_x[t][c];
                d2 += diff * diff;
            }
            dist.emplace_back(d2, static_cast<int>(t));
        }
        std::sort(dist.begin(), dist.end());
        int hits = 0;
        for (int i = 0; i < k; ++i) hits += train_y[static_cast<std::size_t>(dist[i].second)];
        out.push_back(static_cast<double>(hits) / k);
    }
    return out;
}

// Central-difference gradient of an arbitrary scalar function of the model
// parameters. Perturbs one entry at a time; the callback must be a pure
// function of the parameter values.
inline tgcn::Gradients finite_diff_grad(const std::function<double(const tgcn::ModelParams&)>& f,
                                        const tgcn::ModelParams& params, double h) {
    tgcn::ModelParams work = params;
    tgcn::Gradients out = params;
    std::vector<tgcn::Matrix*> work_t, out_t;
    work.for_each_tensor([&](const char*, tgcn::Matrix& m) { work_t.push_back(&m); });
    out.for_each_tensor([&](const char*, tgcn::Matrix& m) { out_t.push_back(&m); });
    for (std::size_t t = 0; t < work_t.size(); ++t) {
        for (std::size_t i = 0; i < work_t[t]->a.size(); ++i) {
            double saved = work_t[t]->a[i];
            work_t[t]->a[i] = saved + h;
            double fp = f(work);
            work_t[t]->a[i] = saved - h;
            double fm = f(work);
            work_t[t]->a[i] = saved;
            out_t[t]->a[i] = (fp - fm) / (2.0 * h);
        }
    }
    return out;
}

// Worst relative disagreement between two gradient sets; entries where both
// sides are below the floor compare at the floor (finite-difference noise
// dominates genuinely tiny gradients).
inline double max_rel_err(const tgcn::Gradients& a, const tgcn::Gradients& b,
                          double floor = 1e-6) {
    std::vector<const tgcn::Matrix*> at, bt;
    a.for_each_tensor([&](const char*, const tgcn::Matrix& m) { at.push_back(&m); });
    b.for_each_tensor([&](const char*, const tgcn::Matrix& m) { bt.push_back(&m); });
    double worst = 0.0;
    for (std::size_t t = 0; t < at.size(); ++t)
        for (std::size_t i = 0; i < at[t]->a.size(); ++i) {
            double x = at[t]->a[i], y = bt[t]->a[i];
            double rel = std::fabs(x - y) / std::max({std::fabs(x), std::fabs(y), floor});
            worst = std::max(worst, rel);
        }
    return worst;
}

}  // namespace oracle
