#pragma once

#include <vector>

#include "tgcn/preprocess.hpp"
#include "tgcn/sparse.hpp"

namespace tgcn {

// Bipartite patient-feature graph. Node ordering is fixed: patients occupy
// rows 0..N-1, non-categorical feature nodes rows N..N+K-1 (schema order).
struct BipartiteGraph {
    int n_patients = 0;
    int n_feature_nodes = 0;
    std::vector<int> feature_node_ids;  // feature_id per feature node
    SparseMatrix adjacency_hat;         // weighted adjacency with unit self-loops
    SparseMatrix adjacency_norm;        // D^{-1/2} A_hat D^{-1/2}

    int n_nodes() const { return n_patients + n_feature_nodes; }
};

// Weighted adjacency with self-loops: off-diagonal (i, N+j) carries the
// processed value, discounted by miss_weight when the value was imputed.
// Structural zeros are kept so the pattern is value-independent.
SparseMatrix build_adjacency(const ProcessedCohort& processed, double miss_weight);

// Row sums of |A_hat| (default) or of A_hat itself (literal), floored at 1e-12.
std::vector<double> degree_vector(const SparseMatrix& adj_hat, bool literal = false);

// Symmetric renormalization; preserves the sparsity pattern exactly.
SparseMatrix normalize(const SparseMatrix& adj_hat, const std::vector<double>& degrees);

BipartiteGraph build_graph(const ProcessedCohort& processed, double miss_weight,
                           bool literal_degrees = false);

}  // namespace tgcn
