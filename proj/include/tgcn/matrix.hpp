#pragma once

#include <cstddef>
#include <vector>

namespace tgcn {

// Row-major dense matrix of doubles. Biases are stored as 1xK matrices so
// optimizer/serialization code can treat every trainable tensor uniformly.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    double* row(int r) { return a.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return a.data() + static_cast<std::size_t>(r) * cols; }

    std::size_t size() const { return a.size(); }
    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }
    void set_zero() { std::fill(a.begin(), a.end(), 0.0); }

    bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }
};

Matrix matmul(const Matrix& A, const Matrix& B);     // A * B
Matrix matmul_tn(const Matrix& A, const Matrix& B);  // A^T * B
Matrix matmul_nt(const Matrix& A, const Matrix& B);  // A * B^T

void add_inplace(Matrix& dst, const Matrix& src);  // dst += src
bool all_finite(const Matrix& m);

}  // namespace tgcn
