#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "tgcn/matrix.hpp"

namespace tgcn {

// CSR with canonical form: row_offsets monotone, column indices strictly
// increasing within each row. Explicit zeros are legal entries (the graph
// keeps structural zeros so the sparsity pattern is stable).
struct SparseMatrix {
    int n_rows = 0;
    int n_cols = 0;
    std::vector<std::int64_t> row_offsets;  // length n_rows + 1
    std::vector<int> col_indices;
    std::vector<double> values;

    std::int64_t nnz() const { return static_cast<std::int64_t>(values.size()); }

    static SparseMatrix identity(int n);

    // Looks up entry (r, c); 0.0 when outside the pattern.
    double at(int r, int c) const;

    void check_canonical() const;  // throws NumericError on violations
};

// Sparse * dense, row-deterministic: each output row accumulates in ascending
// column-index order, so results are bit-stable.
Matrix spmm(const SparseMatrix& A, const Matrix& H);

// Debug/oracle text format: header "n_rows n_cols nnz", then "row col value".
std::string sparse_to_text(const SparseMatrix& A);
SparseMatrix sparse_from_text(std::istream& in);

}  // namespace tgcn
