#pragma once

// Hand-built schemas and cohorts shared across test suites.

#include <string>
#include <vector>

#include "tgcn/schema.hpp"

namespace fixtures {

// n_num numerics, then n_bin binaries, then n_cat categoricals with n_levels
// categories each ("c0", "c1", ...). Ids follow that order.
inline tgcn::FeatureSchema make_schema(int n_num, int n_bin, int n_cat, int n_levels = 3) {
    tgcn::FeatureSchema schema;
    int id = 0;
    for (int i = 0; i < n_num; ++i)
        schema.features.push_back({id++, "num_" + std::to_string(i), tgcn::FeatureKind::Numeric, {}});
    for (int i = 0; i < n_bin; ++i)
        schema.features.push_back({id++, "bin_" + std::to_string(i), tgcn::FeatureKind::Binary, {}});
    for (int i = 0; i < n_cat; ++i) {
        std::vector<std::string> cats;
        for (int c = 0; c < n_levels; ++c) cats.push_back("c" + std::to_string(c));
        schema.features.push_back(
            {id++, "cat_" + std::to_string(i), tgcn::FeatureKind::Categorical, std::move(cats)});
    }
    return schema;
}

inline void put_num(tgcn::Cohort& c, int pid, int fid, double x) {
    c.triplets.push_back({pid, fid, tgcn::RawValue::from_number(x)});
}
inline void put_bit(tgcn::Cohort& c, int pid, int fid, int b) {
    c.triplets.push_back({pid, fid, tgcn::RawValue::from_bit(b)});
}
inline void put_tok(tgcn::Cohort& c, int pid, int fid, const std::string& t) {
    c.triplets.push_back({pid, fid, tgcn::RawValue::from_token(t)});
}

// Three patients over one numeric and one categorical feature, with one
// missing value on each path. The smallest cohort that still exercises every
// parameter tensor of the model.
inline tgcn::Cohort tiny_cohort() {
    tgcn::Cohort c;
    c.n_patients = 3;
    c.schema = make_schema(1, 0, 1, 3);
    put_num(c, 0, 0, 1.2);
    put_num(c, 2, 0, -0.7);  // patient 1 numeric missing
    put_tok(c, 0, 1, "c0");
    put_tok(c, 2, 1, "c1");  // patient 1 categorical missing
    c.labels = std::vector<int>{1, 0, 1};
    return c;
}

// Mixed-kind cohort with every value observed; n_patients rows of synthetic
// but hand-predictable values.
inline tgcn::Cohort dense_cohort(int n_patients) {
    tgcn::Cohort c;
    c.n_patients = n_patients;
    c.schema = make_schema(2, 1, 1, 3);
    for (int p = 0; p < n_patients; ++p) {
        put_num(c, p, 0, 0.5 * p - 1.0);
        put_num(c, p, 1, (p % 3) * 2.0);
        put_bit(c, p, 2, p % 2);
        put_tok(c, p, 3, "c" + std::to_string(p % 3));
    }
    return c;
}

}  // namespace fixtures
