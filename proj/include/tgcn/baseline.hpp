#pragma once

#include <vector>

#include "tgcn/matrix.hpp"
#include "tgcn/preprocess.hpp"

namespace tgcn {

// One dense column: a non-categorical feature (category == -1) or a single
// one-hot level of a categorical feature.
struct ColumnRef {
    int feature_id = 0;
    int category = -1;

    bool operator==(const ColumnRef&) const = default;
};

// Fully imputed tabular view of the cohort: processed values as-is plus
// one-hot-expanded categoricals. Row order = patient order.
struct DenseDesign {
    Matrix X;
    std::vector<ColumnRef> manifest;  // one entry per column
};

DenseDesign densify(const ProcessedCohort& processed);

DenseDesign design_rows(const DenseDesign& design, const std::vector<int>& rows);

// Fraction of positive labels among the k Euclidean-nearest training rows;
// distance ties break toward the lower training-row index.
std::vector<double> knn_score(const DenseDesign& train_design, const std::vector<int>& train_y,
                              const DenseDesign& test_design, int k);

}  // namespace tgcn
