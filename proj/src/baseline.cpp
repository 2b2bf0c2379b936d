#include "tgcn/baseline.hpp"

#include <algorithm>
#include <utility>

#include "tgcn/util.hpp"

namespace tgcn {

DenseDesign densify(const ProcessedCohort& processed) {
    const int N = processed.n_patients;
    const int K = processed.n_edge_features();

    DenseDesign design;
    for (int j = 0; j < K; ++j)
        design.manifest.push_back({processed.edge_features[static_cast<std::size_t>(j)], -1});
    for (int k = 0; k < processed.n_cat_features(); ++k) {
        int fid = processed.cat_features[static_cast<std::size_t>(k)];
        int card = static_cast<int>(processed.schema.at(fid).categories.size());
        for (int c = 0; c < card; ++c) design.manifest.push_back({fid, c});
    }

    design.X = Matrix(N, static_cast<int>(design.manifest.size()));
    for (int i = 0; i < N; ++i) {
        double* row = design.X.row(i);
        for (int j = 0; j < K; ++j) row[j] = processed.v(i, j);
        int col = K;
        for (int k = 0; k < processed.n_cat_features(); ++k) {
            int fid = processed.cat_features[static_cast<std::size_t>(k)];
            int card = static_cast<int>(processed.schema.at(fid).categories.size());
            row[col + processed.cat(i, k)] = 1.0;
            col += card;
        }
    }
    return design;
}

DenseDesign design_rows(const DenseDesign& design, const std::vector<int>& rows) {
    DenseDesign out;
    out.manifest = design.manifest;
    out.X = Matrix(static_cast<int>(rows.size()), design.X.cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        int i = rows[r];
        if (i < 0 || i >= design.X.rows) throw DataError("design_rows: row index out of range");
        const double* src = design.X.row(i);
        double* dst = out.X.row(static_cast<int>(r));
        std::copy(src, src + design.X.cols, dst);
    }
    return out;
}

std::vector<double> knn_score(const DenseDesign& train_design, const std::vector<int>& train_y,
                              const DenseDesign& test_design, int k) {
    if (train_design.manifest != test_design.manifest)
        throw ConfigError("knn: train and test column manifests differ");
    const int n_train = train_design.X.rows;
    if (static_cast<int>(train_y.size()) != n_train)
        throw ConfigError("knn: train labels length mismatch");
    if (k < 1) throw ConfigError("knn: k must be >= 1");
    if (k > n_train) throw ConfigError("knn: k exceeds number of training rows");
    for (int y : train_y)
        if (y != 0 && y != 1) throw ConfigError("knn: labels must be 0 or 1");

    const int w = train_design.X.cols;
    std::vector<double> scores(static_cast<std::size_t>(test_design.X.rows));
    std::vector<std::pair<double, int>> dist(static_cast<std::size_t>(n_train));
    for (int t = 0; t < test_design.X.rows; ++t) {
        const double* q = test_design.X.row(t);
        for (int i = 0; i < n_train; ++i) {
            const double* p = train_design.X.row(i);
            double d2 = 0.0;
            for (int j = 0; j < w; ++j) {
                double diff = q[j] - p[j];
                d2 += diff * diff;
            }
            dist[static_cast<std::size_t>(i)] = {d2, i};  // index breaks ties
        }
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        int pos = 0;
        for (int j = 0; j < k; ++j) pos += train_y[static_cast<std::size_t>(dist[j].second)];
        scores[static_cast<std::size_t>(t)] = static_cast<double>(pos) / k;
    }
    return scores;
}

}  // namespace tgcn
