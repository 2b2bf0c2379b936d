#include "tgcn/graph.hpp"

#include <cmath>
#include <limits>

#include "tgcn/util.hpp"

namespace tgcn {

namespace {
constexpr double kDegreeFloor = 1e-12;
}

SparseMatrix build_adjacency(const ProcessedCohort& processed, double miss_weight) {
    const int N = processed.n_patients;
    const int K = processed.n_edge_features();
    if (static_cast<std::int64_t>(N) + K > std::numeric_limits<int>::max())
        throw NumericError("build_adjacency: node count overflows index type");
    const int n = N + K;

    SparseMatrix adj;
    adj.n_rows = adj.n_cols = n;
    adj.row_offsets.reserve(static_cast<std::size_t>(n) + 1);
    adj.row_offsets.push_back(0);
    adj.col_indices.reserve(static_cast<std::size_t>(n) + 2 * static_cast<std::size_t>(N) * K);
    adj.values.reserve(adj.col_indices.capacity());

    auto weight = [&](int p, int j) {
        double v = processed.v(p, j);
        return processed.m(p, j) ? v : miss_weight * v;
    };

    // Patient rows: self-loop at column i, then feature columns N..N+K-1.
    for (int i = 0; i < N; ++i) {
        adj.col_indices.push_back(i);
        adj.values.push_back(1.0);
        for (int j = 0; j < K; ++j) {
            adj.col_indices.push_back(N + j);
            adj.values.push_back(weight(i, j));
        }
        adj.row_offsets.push_back(static_cast<std::int64_t>(adj.values.size()));
    }
    // Feature rows: patient columns 0..N-1, then the self-loop.
    for (int j = 0; j < K; ++j) {
        for (int i = 0; i < N; ++i) {
            adj.col_indices.push_back(i);
            adj.values.push_back(weight(i, j));
        }
        adj.col_indices.push_back(N + j);
        adj.values.push_back(1.0);
        adj.row_offsets.push_back(static_cast<std::int64_t>(adj.values.size()));
    }
    return adj;
}

std::vector<double> degree_vector(const SparseMatrix& adj_hat, bool literal) {
    if (adj_hat.n_rows != adj_hat.n_cols) throw NumericError("degree_vector: matrix not square");
    std::vector<double> degrees(static_cast<std::size_t>(adj_hat.n_rows), 0.0);
    for (int r = 0; r < adj_hat.n_rows; ++r) {
        double d = 0.0;
        for (std::int64_t k = adj_hat.row_offsets[static_cast<std::size_t>(r)];
             k < adj_hat.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
            double v = adj_hat.values[static_cast<std::size_t>(k)];
            d += literal ? v : std::abs(v);
        }
        degrees[static_cast<std::size_t>(r)] = d < kDegreeFloor ? kDegreeFloor : d;
    }
    return degrees;
}

SparseMatrix normalize(const SparseMatrix& adj_hat, const std::vector<double>& degrees) {
    if (degrees.size() != static_cast<std::size_t>(adj_hat.n_rows))
        throw NumericError("normalize: degree vector length mismatch");
    for (double d : degrees)
        if (!(d > 0.0)) throw NumericError("normalize: non-positive degree");

    SparseMatrix norm = adj_hat;
    for (int r = 0; r < norm.n_rows; ++r) {
        double dr = degrees[static_cast<std::size_t>(r)];
        for (std::int64_t k = norm.row_offsets[static_cast<std::size_t>(r)];
             k < norm.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
            int c = norm.col_indices[static_cast<std::size_t>(k)];
            // sqrt(dr * dc) is symmetric in (r, c), so both triangles compute
            // the exact same value.
            norm.values[static_cast<std::size_t>(k)] /=
                std::sqrt(dr * degrees[static_cast<std::size_t>(c)]);
        }
    }
    return norm;
}

BipartiteGraph build_graph(const ProcessedCohort& processed, double miss_weight,
                           bool literal_degrees) {
    BipartiteGraph g;
    g.n_patients = processed.n_patients;
    g.n_feature_nodes = processed.n_edge_features();
    g.feature_node_ids = processed.edge_features;
    g.adjacency_hat = build_adjacency(processed, miss_weight);
    g.adjacency_norm = normalize(g.adjacency_hat, degree_vector(g.adjacency_hat, literal_degrees));
    return g;
}

}  // namespace tgcn
