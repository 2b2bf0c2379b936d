#include "tgcn/sparse.hpp"

#include <algorithm>
#include <sstream>

#include "tgcn/util.hpp"

namespace tgcn {

SparseMatrix SparseMatrix::identity(int n) {
    SparseMatrix m;
    m.n_rows = m.n_cols = n;
    m.row_offsets.resize(static_cast<std::size_t>(n) + 1);
    m.col_indices.resize(static_cast<std::size_t>(n));
    m.values.assign(static_cast<std::size_t>(n), 1.0);
    for (int i = 0; i <= n; ++i) m.row_offsets[static_cast<std::size_t>(i)] = i;
    for (int i = 0; i < n; ++i) m.col_indices[static_cast<std::size_t>(i)] = i;
    return m;
}

double SparseMatrix::at(int r, int c) const {
    auto begin = col_indices.begin() + row_offsets[static_cast<std::size_t>(r)];
    auto end = col_indices.begin() + row_offsets[static_cast<std::size_t>(r) + 1];
    auto it = std::lower_bound(begin, end, c);
    if (it == end || *it != c) return 0.0;
    return values[static_cast<std::size_t>(it - col_indices.begin())];
}

void SparseMatrix::check_canonical() const {
    if (static_cast<int>(row_offsets.size()) != n_rows + 1)
        throw NumericError("sparse: row_offsets length mismatch");
    if (row_offsets.front() != 0 || row_offsets.back() != nnz())
        throw NumericError("sparse: row_offsets endpoints invalid");
    for (int r = 0; r < n_rows; ++r) {
        std::int64_t lo = row_offsets[static_cast<std::size_t>(r)];
        std::int64_t hi = row_offsets[static_cast<std::size_t>(r) + 1];
        if (lo > hi) throw NumericError("sparse: row_offsets not monotone");
        for (std::int64_t k = lo; k < hi; ++k) {
            int c = col_indices[static_cast<std::size_t>(k)];
            if (c < 0 || c >= n_cols) throw NumericError("sparse: column index out of range");
            if (k > lo && col_indices[static_cast<std::size_t>(k - 1)] >= c)
                throw NumericError("sparse: columns not strictly increasing in row " + std::to_string(r));
        }
    }
}

Matrix spmm(const SparseMatrix& A, const Matrix& H) {
    if (A.n_cols != H.rows) throw NumericError("spmm: dimension mismatch");
    Matrix out(A.n_rows, H.cols);
    for (int r = 0; r < A.n_rows; ++r) {
        double* orow = out.row(r);
        std::int64_t lo = A.row_offsets[static_cast<std::size_t>(r)];
        std::int64_t hi = A.row_offsets[static_cast<std::size_t>(r) + 1];
        for (std::int64_t k = lo; k < hi; ++k) {
            double w = A.values[static_cast<std::size_t>(k)];
            if (w == 0.0) continue;
            const double* hrow = H.row(A.col_indices[static_cast<std::size_t>(k)]);
            for (int j = 0; j < H.cols; ++j) orow[j] += w * hrow[j];
        }
    }
    return out;
}

std::string sparse_to_text(const SparseMatrix& A) {
    std::string out = std::to_string(A.n_rows) + " " + std::to_string(A.n_cols) + " " +
                      std::to_string(A.nnz()) + "\n";
    for (int r = 0; r < A.n_rows; ++r) {
        for (std::int64_t k = A.row_offsets[static_cast<std::size_t>(r)];
             k < A.row_offsets[static_cast<std::size_t>(r) + 1]; ++k) {
            out += std::to_string(r) + " " +
                   std::to_string(A.col_indices[static_cast<std::size_t>(k)]) + " " +
                   format_shortest(A.values[static_cast<std::size_t>(k)]) + "\n";
        }
    }
    return out;
}

SparseMatrix sparse_from_text(std::istream& in) {
    SparseMatrix m;
    std::int64_t nnz = 0;
    if (!(in >> m.n_rows >> m.n_cols >> nnz)) throw DataError("sparse text: bad header");
    std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(m.n_rows));
    for (std::int64_t i = 0; i < nnz; ++i) {
        int r = 0, c = 0;
        double v = 0.0;
        if (!(in >> r >> c >> v)) throw DataError("sparse text: truncated entries");
        if (r < 0 || r >= m.n_rows || c < 0 || c >= m.n_cols)
            throw DataError("sparse text: entry out of range");
        rows[static_cast<std::size_t>(r)].push_back({c, v});
    }
    m.row_offsets.assign(static_cast<std::size_t>(m.n_rows) + 1, 0);
    for (int r = 0; r < m.n_rows; ++r) {
        auto& row = rows[static_cast<std::size_t>(r)];
        std::sort(row.begin(), row.end());
        for (auto& [c, v] : row) {
            m.col_indices.push_back(c);
            m.values.push_back(v);
        }
        m.row_offsets[static_cast<std::size_t>(r) + 1] = static_cast<std::int64_t>(m.values.size());
    }
    m.check_canonical();
    return m;
}

}  // namespace tgcn
