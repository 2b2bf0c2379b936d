#include "tgcn/matrix.hpp"

#include <cmath>

#include "tgcn/util.hpp"

namespace tgcn {

Matrix matmul(const Matrix& A, const Matrix& B) {
    if (A.cols != B.rows) throw NumericError("matmul: inner dimension mismatch");
    Matrix C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i) {
        const double* arow = A.row(i);
        double* crow = C.row(i);
        for (int k = 0; k < A.cols; ++k) {
            double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = B.row(k);
            for (int j = 0; j < B.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return C;
}

Matrix matmul_tn(const Matrix& A, const Matrix& B) {
    if (A.rows != B.rows) throw NumericError("matmul_tn: row count mismatch");
    Matrix C(A.cols, B.cols);
    for (int k = 0; k < A.rows; ++k) {
        const double* arow = A.row(k);
        const double* brow = B.row(k);
        for (int i = 0; i < A.cols; ++i) {
            double aki = arow[i];
            if (aki == 0.0) continue;
            double* crow = C.row(i);
            for (int j = 0; j < B.cols; ++j) crow[j] += aki * brow[j];
        }
    }
    return C;
}

Matrix matmul_nt(const Matrix& A, const Matrix& B) {
    if (A.cols != B.cols) throw NumericError("matmul_nt: column count mismatch");
    Matrix C(A.rows, B.rows);
    for (int i = 0; i < A.rows; ++i) {
        const double* arow = A.row(i);
        double* crow = C.row(i);
        for (int j = 0; j < B.rows; ++j) {
            const double* brow = B.row(j);
            double s = 0.0;
            for (int k = 0; k < A.cols; ++k) s += arow[k] * brow[k];
            crow[j] = s;
        }
    }
    return C;
}

void add_inplace(Matrix& dst, const Matrix& src) {
    if (!dst.same_shape(src)) throw NumericError("add_inplace: shape mismatch");
    for (std::size_t i = 0; i < dst.a.size(); ++i) dst.a[i] += src.a[i];
}

bool all_finite(const Matrix& m) {
    for (double v : m.a)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace tgcn
