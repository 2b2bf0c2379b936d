#include <doctest.h>

#include <cmath>
#include <vector>

#include "tgcn/baseline.hpp"
#include "tgcn/preprocess.hpp"
#include "tgcn/rng.hpp"
#include "tgcn/util.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace tgcn;

namespace {

// Hand-built design with one 2-wide coordinate block, no categoricals.
DenseDesign point_design(const std::vector<std::pair<double, double>>& pts) {
    DenseDesign d;
    d.X = Matrix(static_cast<int>(pts.size()), 2);
    for (int i = 0; i < d.X.rows; ++i) {
        d.X(i, 0) = pts[static_cast<std::size_t>(i)].first;
        d.X(i, 1) = pts[static_cast<std::size_t>(i)].second;
    }
    d.manifest = {{0, -1}, {1, -1}};
    return d;
}

std::vector<int> all_rows(int n) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    return idx;
}

DenseDesign random_design(int rows, int cols, Rng& rng) {
    DenseDesign d;
    d.X = Matrix(rows, cols);
    for (double& v : d.X.a) v = rng.uniform(-1.0, 1.0);
    d.manifest.clear();
    for (int j = 0; j < cols; ++j) d.manifest.push_back({j, -1});
    return d;
}

}  // namespace

TEST_CASE("densify lays out edge features then one-hot blocks") {
    Cohort c = fixtures::dense_cohort(6);
    PreprocessStats stats = fit(c, all_rows(6));
    ProcessedCohort p = transform(c, stats);
    DenseDesign d = densify(p);

    // 3 non-categorical columns + 3 levels of the single categorical
    REQUIRE(d.X.cols == 6);
    REQUIRE(d.X.rows == 6);
    REQUIRE(d.manifest.size() == 6);
    CHECK(d.manifest[0] == ColumnRef{0, -1});
    CHECK(d.manifest[1] == ColumnRef{1, -1});
    CHECK(d.manifest[2] == ColumnRef{2, -1});
    CHECK(d.manifest[3] == ColumnRef{3, 0});
    CHECK(d.manifest[4] == ColumnRef{3, 1});
    CHECK(d.manifest[5] == ColumnRef{3, 2});

    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 3; ++j) CHECK(d.X(i, j) == p.v(i, j));
        double onehot = d.X(i, 3) + d.X(i, 4) + d.X(i, 5);
        CHECK(onehot == 1.0);
        CHECK(d.X(i, 3 + i % 3) == 1.0);  // tok cycles c0,c1,c2
    }
}

TEST_CASE("densify uses imputed values for missing entries") {
    Cohort c = fixtures::tiny_cohort();
    PreprocessStats stats = fit(c, all_rows(3));
    ProcessedCohort p = transform(c, stats);
    DenseDesign d = densify(p);

    REQUIRE(d.X.cols == 4);  // 1 numeric + 3 levels
    CHECK(d.X(1, 0) == p.v(1, 0));  // median-imputed, not zero
    // patient 1 has no token; mode (c0) supplies the one-hot
    CHECK(d.X(1, 1) == 1.0);
    CHECK(d.X(1, 2) == 0.0);
    CHECK(d.X(1, 3) == 0.0);
}

TEST_CASE("design_rows subsets and preserves the manifest") {
    Cohort c = fixtures::dense_cohort(5);
    DenseDesign d = densify(transform(c, fit(c, all_rows(5))));
    DenseDesign sub = design_rows(d, {4, 1});
    REQUIRE(sub.X.rows == 2);
    CHECK(sub.manifest == d.manifest);
    for (int j = 0; j < d.X.cols; ++j) {
        CHECK(sub.X(0, j) == d.X(4, j));
        CHECK(sub.X(1, j) == d.X(1, j));
    }
    CHECK_THROWS_AS(design_rows(d, {5}), DataError);
    CHECK_THROWS_AS(design_rows(d, {-1}), DataError);
}

TEST_CASE("k=1 copies the label of the coincident training row") {
    DenseDesign train = point_design({{0.0, 0.0}, {10.0, 10.0}, {0.0, 1.0}});
    std::vector<int> y = {0, 1, 0};
    DenseDesign test = point_design({{10.0, 10.0}, {0.0, 0.0}, {9.0, 9.5}});
    std::vector<double> s = knn_score(train, y, test, 1);
    CHECK(s == std::vector<double>{1.0, 0.0, 1.0});
}

TEST_CASE("k equal to the pool size yields the prevalence everywhere") {
    DenseDesign train = point_design({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
    std::vector<int> y = {1, 0, 0, 1};
    DenseDesign test = point_design({{-5.0, 2.0}, {8.0, -1.0}});
    std::vector<double> s = knn_score(train, y, test, 4);
    CHECK(s == std::vector<double>{0.5, 0.5});
}

TEST_CASE("distance ties break toward the lower training index") {
    DenseDesign train = point_design({{1.0, 1.0}, {1.0, 1.0}, {4.0, 4.0}});
    DenseDesign test = point_design({{1.0, 1.0}});
    CHECK(knn_score(train, {1, 0, 0}, test, 1) == std::vector<double>{1.0});
    CHECK(knn_score(train, {0, 1, 1}, test, 1) == std::vector<double>{0.0});
    // both duplicates enter at k=2 regardless of label placement
    CHECK(knn_score(train, {1, 0, 0}, test, 2) == std::vector<double>{0.5});
}

TEST_CASE("scores match the exhaustive-sort reference") {
    Rng rng(314);
    for (int trial = 0; trial < 12; ++trial) {
        DenseDesign train = random_design(30, 5, rng);
        DenseDesign test = random_design(9, 5, rng);
        std::vector<int> y;
        for (int i = 0; i < 30; ++i) y.push_back(rng.bernoulli(0.4) ? 1 : 0);
        oracle::Dense train_x = oracle::dense_from_matrix(train.X);
        oracle::Dense test_x = oracle::dense_from_matrix(test.X);
        for (int k : {1, 3, 7, 30}) {
            std::vector<double> got = knn_score(train, y, test, k);
            std::vector<double> want = oracle::knn_scores(train_x, y, test_x, k);
            CHECK(got == want);
            for (double s : got) {
                double scaled = s * k;
                CHECK(scaled == std::floor(scaled));  // hits / k exactly
            }
        }
    }
}

TEST_CASE("clustered points score toward their cluster's label") {
    std::vector<std::pair<double, double>> pts;
    std::vector<int> y;
    for (int i = 0; i < 10; ++i) {
        pts.push_back({0.0 + 0.1 * i, 0.0});
        y.push_back(0);
        pts.push_back({10.0 + 0.1 * i, 10.0});
        y.push_back(1);
    }
    DenseDesign train = point_design(pts);
    DenseDesign test = point_design({{0.2, 0.1}, {10.3, 9.9}});
    std::vector<double> s = knn_score(train, y, test, 5);
    CHECK(s[0] == 0.0);
    CHECK(s[1] == 1.0);
}

TEST_CASE("scoring validates its inputs") {
    DenseDesign train = point_design({{0, 0}, {1, 1}});
    DenseDesign test = point_design({{0.5, 0.5}});
    std::vector<int> y = {0, 1};

    CHECK_THROWS_AS(knn_score(train, y, test, 0), ConfigError);
    CHECK_THROWS_AS(knn_score(train, y, test, 3), ConfigError);
    CHECK_THROWS_AS(knn_score(train, {0}, test, 1), ConfigError);
    CHECK_THROWS_AS(knn_score(train, {0, 2}, test, 1), ConfigError);

    DenseDesign other = test;
    other.manifest[1] = ColumnRef{1, 0};
    CHECK_THROWS_AS(knn_score(train, y, other, 1), ConfigError);

    DenseDesign narrow;
    narrow.X = Matrix(1, 1);
    narrow.manifest = {{0, -1}};
    CHECK_THROWS_AS(knn_score(train, y, narrow, 1), ConfigError);
}
