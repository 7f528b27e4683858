#include <doctest.h>

#include <cmath>

#include "leaklab/rng.hpp"
#include "leaklab/transforms.hpp"

using namespace leaklab;
using inject::TransformKind;

namespace {

Matrix random_matrix(int n, int p, std::uint64_t seed) {
    Rng rng(seed);
    Matrix X(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t j = 0; j < X.cols(); ++j) X(i, j) = rng.normal();
    return X;
}

} // namespace

TEST_SUITE("transforms") {

TEST_CASE("zscale standardizes on the fit rows only") {
    auto X = random_matrix(40, 3, 1);
    std::vector<int> fit_rows;
    for (int i = 0; i < 20; ++i) fit_rows.push_back(i);
    const std::vector<bool> mask(3, false);
    const auto t = inject::fit_transform(TransformKind::zscale, X, fit_rows, mask, {});
    const auto Xt = t->apply(X);
    for (std::size_t j = 0; j < 3; ++j) {
        double mean = 0;
        for (int i = 0; i < 20; ++i) mean += Xt(static_cast<std::size_t>(i), j);
        CHECK(mean / 20 == doctest::Approx(0.0).epsilon(1e-9));
        double var = 0;
        for (int i = 0; i < 20; ++i) var += Xt(static_cast<std::size_t>(i), j) * Xt(static_cast<std::size_t>(i), j);
        CHECK(var / 20 == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("fit never reads rows outside fit_rows") {
    // poisoning the held-out rows must not change the fitted parameters
    auto X = random_matrix(40, 3, 2);
    auto poisoned = X;
    for (int i = 20; i < 40; ++i)
        for (std::size_t j = 0; j < 3; ++j) poisoned(static_cast<std::size_t>(i), j) += 100.0;
    std::vector<int> fit_rows;
    for (int i = 0; i < 20; ++i) fit_rows.push_back(i);
    const std::vector<bool> mask(3, false);
    Matrix query = random_matrix(5, 3, 3);
    for (auto kind : {TransformKind::zscale, TransformKind::minmax, TransformKind::equal_width_bins,
                      TransformKind::pca}) {
        const auto t1 = inject::fit_transform(kind, X, fit_rows, mask, {});
        const auto t2 = inject::fit_transform(kind, poisoned, fit_rows, mask, {});
        CHECK(t1->apply(query) == t2->apply(query));
    }
}

TEST_CASE("constant columns zero out identically for any fit scope") {
    Matrix X(10, 2);
    for (std::size_t i = 0; i < 10; ++i) {
        X(i, 0) = 7.5;
        X(i, 1) = static_cast<double>(i);
    }
    const std::vector<bool> mask(2, false);
    std::vector<int> half{0, 1, 2, 3, 4};
    const auto global = inject::fit_transform(TransformKind::zscale, X, identity_indices(10), mask, {});
    const auto fold = inject::fit_transform(TransformKind::zscale, X, half, mask, {});
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(global->apply(X)(i, 0) == 0.0);
        CHECK(fold->apply(X)(i, 0) == 0.0);
    }
}

TEST_CASE("minmax maps the fit range onto [0,1]") {
    auto X = random_matrix(30, 2, 4);
    const std::vector<bool> mask(2, false);
    const auto t = inject::fit_transform(TransformKind::minmax, X, identity_indices(30), mask, {});
    const auto Xt = t->apply(X);
    for (std::size_t j = 0; j < 2; ++j) {
        double lo = 1e9, hi = -1e9;
        for (std::size_t i = 0; i < 30; ++i) {
            lo = std::min(lo, Xt(i, j));
            hi = std::max(hi, Xt(i, j));
        }
        CHECK(lo == doctest::Approx(0.0));
        CHECK(hi == doctest::Approx(1.0));
    }
}

TEST_CASE("ordinal encode uses first appearance within the fit rows") {
    Matrix X(6, 1);
    const double vals[6] = {5, 9, 5, 7, 9, 2};
    for (std::size_t i = 0; i < 6; ++i) X(i, 0) = vals[i];
    const std::vector<bool> mask{true};
    std::vector<int> fit_rows{0, 1, 2, 3}; // sees 5, 9, 7
    const auto t = inject::fit_transform(TransformKind::ordinal_encode, X, fit_rows, mask, {});
    const auto Xt = t->apply(X);
    CHECK(Xt(0, 0) == 0.0); // 5
    CHECK(Xt(1, 0) == 1.0); // 9
    CHECK(Xt(2, 0) == 0.0);
    CHECK(Xt(3, 0) == 2.0); // 7
    CHECK(Xt(4, 0) == 1.0);
    CHECK(Xt(5, 0) == 3.0); // unseen value 2 -> next code

    const std::vector<bool> none{false};
    CHECK_THROWS_AS(inject::fit_transform(TransformKind::ordinal_encode, X, fit_rows, none, {}),
                    std::invalid_argument);
}

TEST_CASE("equal width bins clamp strays and skip categorical columns") {
    Matrix X(5, 2);
    for (std::size_t i = 0; i < 5; ++i) {
        X(i, 0) = static_cast<double>(i); // 0..4
        X(i, 1) = 3.0;                    // categorical codes
    }
    const std::vector<bool> mask{false, true};
    inject::TransformParams params;
    params.bins = 4;
    std::vector<int> fit_rows{0, 1, 2, 3}; // range 0..3
    const auto t = inject::fit_transform(TransformKind::equal_width_bins, X, fit_rows, mask, params);
    const auto Xt = t->apply(X);
    CHECK(Xt(0, 0) == 0.0);
    CHECK(Xt(3, 0) == 3.0);
    CHECK(Xt(4, 0) == 3.0); // out-of-range value clamps to the top bin
    for (std::size_t i = 0; i < 5; ++i) CHECK(Xt(i, 1) == 3.0);
}

TEST_CASE("pca recovers the dominant direction") {
    // strong variance along (1,1)/sqrt(2), weak along (1,-1)
    Rng rng(6);
    Matrix X(300, 2);
    for (std::size_t i = 0; i < 300; ++i) {
        const double a = 3.0 * rng.normal();
        const double b = 0.3 * rng.normal();
        X(i, 0) = (a + b) / std::sqrt(2.0);
        X(i, 1) = (a - b) / std::sqrt(2.0);
    }
    const std::vector<bool> mask(2, false);
    inject::TransformParams params;
    params.components = 1;
    const auto t = inject::fit_transform(TransformKind::pca, X, identity_indices(300), mask, params);
    const auto Xt = t->apply(X);
    CHECK(Xt.cols() == 1);
    // projected variance close to the dominant eigenvalue (~9)
    double var = 0;
    for (std::size_t i = 0; i < 300; ++i) var += Xt(i, 0) * Xt(i, 0);
    var /= 299;
    CHECK(var == doctest::Approx(9.0).epsilon(0.15));

    params.components = 3;
    CHECK_THROWS_AS(inject::fit_transform(TransformKind::pca, X, identity_indices(300), mask, params),
                    std::invalid_argument);
}

TEST_CASE("chained transform composes encode, scale and pca") {
    auto X = random_matrix(50, 4, 9);
    for (std::size_t i = 0; i < 50; ++i) X(i, 0) = static_cast<double>(i % 3); // categorical codes
    const std::vector<bool> mask{true, false, false, false};
    inject::TransformParams params;
    params.components = 2;
    const auto t = inject::fit_transform(TransformKind::chained, X, identity_indices(50), mask, params);
    CHECK(t->apply(X).cols() == 2);
}

TEST_CASE("outlier trim removes the farthest candidates from the chosen centroid") {
    Matrix X(10, 1);
    for (std::size_t i = 0; i < 10; ++i) X(i, 0) = static_cast<double>(i);
    std::vector<int> all = identity_indices(10);
    // centroid 4.5; trim 0.2 of 10 rows -> remove rows 0 and 9 (ties none)
    const auto kept = inject::trim_kept_rows(X, all, all, 0.2);
    CHECK(kept.size() == 8);
    CHECK(std::find(kept.begin(), kept.end(), 0) == kept.end());
    CHECK(std::find(kept.begin(), kept.end(), 9) == kept.end());

    // different centroid rows change which candidates fall
    std::vector<int> low{0, 1, 2};
    const auto kept_low = inject::trim_kept_rows(X, low, all, 0.2);
    CHECK(std::find(kept_low.begin(), kept_low.end(), 9) == kept_low.end());
    CHECK(std::find(kept_low.begin(), kept_low.end(), 0) != kept_low.end());

    CHECK(inject::trim_kept_rows(X, all, all, 0.0).size() == 10);
    CHECK_THROWS_AS(inject::trim_kept_rows(X, all, all, 0.5), std::invalid_argument);
}

TEST_CASE("target encoding worked examples") {
    // category with labels [1,1,0] and m=0 -> 2/3
    std::vector<double> column{1, 1, 1, 2, 2};
    std::vector<int> labels{1, 1, 0, 0, 1};
    std::vector<int> fit_rows{0, 1, 2, 3, 4};
    const auto codes = inject::target_encode_column(column, labels, fit_rows, 0.0);
    CHECK(codes[0] == doctest::Approx(2.0 / 3.0));
    CHECK(codes[3] == doctest::Approx(0.5));

    // m -> infinity pulls every code to the global mean (3/5)
    const auto smooth = inject::target_encode_column(column, labels, fit_rows, 1e9);
    for (double c : smooth) CHECK(c == doctest::Approx(0.6).epsilon(1e-6));

    // single-row categories with m=0 and full-data scope leak the row label
    std::vector<double> unique_col{1, 2, 3, 4};
    std::vector<int> y{1, 0, 1, 0};
    const auto leak = inject::target_encode_column(unique_col, y, std::vector<int>{0, 1, 2, 3}, 0.0);
    for (std::size_t i = 0; i < 4; ++i) CHECK(leak[i] == static_cast<double>(y[i]));

    // unseen category maps to the fit-scope global mean
    const auto partial = inject::target_encode_column(column, labels, std::vector<int>{0, 1, 2}, 0.0);
    CHECK(partial[3] == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("feature selection ranks by |point-biserial| with index ties") {
    Rng rng(10);
    Matrix X(200, 4);
    std::vector<int> y(200);
    for (std::size_t i = 0; i < 200; ++i) {
        y[i] = static_cast<int>(i % 2);
        X(i, 0) = rng.normal();              // noise
        X(i, 1) = y[i] * 2.0 + rng.normal(); // strong signal
        X(i, 2) = y[i] * 0.7 + rng.normal(); // weak signal
        X(i, 3) = rng.normal();              // noise
    }
    const auto top2 = inject::select_top_features(X, y, identity_indices(200), 2);
    CHECK(top2 == std::vector<int>{1, 2});
    const auto top4 = inject::select_top_features(X, y, identity_indices(200), 4);
    CHECK(top4 == std::vector<int>{0, 1, 2, 3});
    CHECK_THROWS_AS(inject::select_top_features(X, y, identity_indices(200), 5), std::invalid_argument);

    // selection ignores rows outside the fit scope
    auto poisoned = X;
    for (std::size_t i = 100; i < 200; ++i) poisoned(i, 0) = y[i] * 50.0;
    std::vector<int> first_half;
    for (int i = 0; i < 100; ++i) first_half.push_back(i);
    CHECK(inject::select_top_features(poisoned, y, first_half, 2) ==
          inject::select_top_features(X, y, first_half, 2));
}

TEST_CASE("smote interpolation formula") {
    const std::vector<double> base{0.0, 0.0};
    const std::vector<double> neighbor{1.0, 1.0};
    const auto mid = inject::smote_point(base, neighbor, 0.5);
    CHECK(mid == std::vector<double>{0.5, 0.5});
    CHECK(inject::smote_point(base, neighbor, 0.0) == base);
    CHECK(inject::smote_point(base, neighbor, 1.0) == neighbor);
}

} // TEST_SUITE
