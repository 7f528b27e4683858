#include <doctest.h>

#include <cmath>

#include "leaklab/metrics.hpp"
#include "leaklab/models.hpp"
#include "leaklab/rng.hpp"
#include "leaklab/synth.hpp"

using namespace leaklab;
using models::Algorithm;

namespace {

struct Toy {
    Matrix X;
    std::vector<int> y;
};

Toy gaussian_toy(int n, int p, double sep, std::uint64_t seed) {
    Rng rng(seed);
    Toy toy;
    toy.X = Matrix(static_cast<std::size_t>(n), static_cast<std::size_t>(p));
    toy.y.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        toy.y[static_cast<std::size_t>(i)] = i % 2;
        const double mean = toy.y[static_cast<std::size_t>(i)] == 1 ? sep / 2 : -sep / 2;
        for (int j = 0; j < p; ++j)
            toy.X(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = mean + rng.normal();
    }
    return toy;
}

} // namespace

TEST_SUITE("models") {

TEST_CASE("logistic regression ignores the seed entirely") {
    const auto toy = gaussian_toy(120, 4, 1.0, 3);
    auto s1 = models::default_spec(Algorithm::LR, 1);
    auto s2 = models::default_spec(Algorithm::LR, 2);
    const auto m1 = models::fit(s1, toy.X, toy.y);
    const auto m2 = models::fit(s2, toy.X, toy.y);
    CHECK(models::predict_scores(m1, toy.X) == models::predict_scores(m2, toy.X));
}

TEST_CASE("every learner refits bit-identically under a fixed seed") {
    const auto toy = gaussian_toy(80, 5, 0.8, 9);
    for (auto algo : {Algorithm::LR, Algorithm::GNB, Algorithm::DT, Algorithm::RF, Algorithm::KNN}) {
        const auto spec = models::default_spec(algo, 42);
        const auto a = models::predict_scores(models::fit(spec, toy.X, toy.y), toy.X);
        const auto b = models::predict_scores(models::fit(spec, toy.X, toy.y), toy.X);
        CHECK(a == b);
    }
}

TEST_CASE("unlimited tree memorizes unique rows") {
    const auto toy = gaussian_toy(64, 3, 0.2, 5);
    auto spec = models::default_spec(Algorithm::DT);
    spec.hyperparameters["max_depth"] = 0;
    const auto model = models::fit(spec, toy.X, toy.y);
    CHECK(metrics::auc(models::predict_scores(model, toy.X), toy.y) == 1.0);
}

TEST_CASE("depth cap actually limits memorization") {
    const auto toy = gaussian_toy(128, 3, 0.0, 6);
    auto spec = models::default_spec(Algorithm::DT);
    spec.hyperparameters["max_depth"] = 1;
    const auto model = models::fit(spec, toy.X, toy.y);
    CHECK(metrics::auc(models::predict_scores(model, toy.X), toy.y) < 0.9);
}

TEST_CASE("gnb posterior matches the closed form on toy data") {
    // one feature, class means -1 and +1, equal priors, equal variances
    Matrix X(4, 1);
    X(0, 0) = -1.5;
    X(1, 0) = -0.5;
    X(2, 0) = 0.5;
    X(3, 0) = 1.5;
    const std::vector<int> y{0, 0, 1, 1};
    auto spec = models::default_spec(Algorithm::GNB);
    spec.hyperparameters["var_smoothing"] = 0.0;
    const auto model = models::fit(spec, X, y);

    Matrix q(1, 1);
    q(0, 0) = 0.0; // symmetric point
    CHECK(models::predict_scores(model, q)[0] == doctest::Approx(0.5));

    // closed form: means +/-1, var = 0.25 per class, equal priors
    // P(1|x) = 1 / (1 + exp((log N(x|-1) - log N(x|+1))))
    q(0, 0) = 0.4;
    const double var = 0.25;
    const double l0 = -0.5 * std::log(2 * M_PI * var) - (0.4 + 1) * (0.4 + 1) / (2 * var);
    const double l1 = -0.5 * std::log(2 * M_PI * var) - (0.4 - 1) * (0.4 - 1) / (2 * var);
    const double expected = std::exp(l1) / (std::exp(l0) + std::exp(l1));
    CHECK(models::predict_scores(model, q)[0] == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("knn scores its own row by its own label at k=1") {
    const auto toy = gaussian_toy(50, 4, 0.5, 8);
    auto spec = models::default_spec(Algorithm::KNN);
    spec.hyperparameters["k"] = 1;
    const auto model = models::fit(spec, toy.X, toy.y);
    const auto scores = models::predict_scores(model, toy.X);
    for (std::size_t i = 0; i < scores.size(); ++i)
        CHECK(scores[i] == static_cast<double>(toy.y[i]));
}

TEST_CASE("rf scores stay in [0,1] and average tree frequencies") {
    const auto toy = gaussian_toy(90, 5, 0.7, 12);
    auto spec = models::default_spec(Algorithm::RF, 7);
    spec.hyperparameters["n_trees"] = 9;
    const auto model = models::fit(spec, toy.X, toy.y);
    for (double s : models::predict_scores(model, toy.X)) {
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        // with 9 unit-weight trees scores sit on a coarse lattice unless
        // leaves are mixed; just confirm the range here
    }
    // seed changes the forest
    auto other = spec;
    other.seed = 8;
    CHECK(models::predict_scores(models::fit(other, toy.X, toy.y), toy.X) !=
          models::predict_scores(model, toy.X));
}

TEST_CASE("prediction edge cases") {
    const auto toy = gaussian_toy(30, 3, 0.5, 1);
    const auto model = models::fit(models::default_spec(Algorithm::LR), toy.X, toy.y);
    CHECK(models::predict_scores(model, Matrix(0, 3)).empty());
    CHECK_THROWS_AS(models::predict_scores(model, Matrix(4, 2)), std::invalid_argument);
}

TEST_CASE("fit preconditions") {
    const auto toy = gaussian_toy(20, 2, 0.5, 2);
    std::vector<int> ones(20, 1);
    CHECK_THROWS_AS(models::fit(models::default_spec(Algorithm::LR), toy.X, ones),
                    std::invalid_argument);
    std::vector<int> short_y(10, 0);
    CHECK_THROWS_AS(models::fit(models::default_spec(Algorithm::LR), toy.X, short_y),
                    std::invalid_argument);
    auto bad = models::default_spec(Algorithm::KNN);
    bad.hyperparameters["k"] = 0;
    CHECK_THROWS_AS(models::fit(bad, toy.X, toy.y), std::invalid_argument);
    auto wrong_key = models::default_spec(Algorithm::GNB);
    wrong_key.hyperparameters["k"] = 3;
    CHECK_THROWS_AS(models::fit(wrong_key, toy.X, toy.y), std::invalid_argument);
}

TEST_CASE("full-batch lr loss is non-increasing at a small step size") {
    const auto toy = gaussian_toy(100, 4, 1.0, 21);
    const auto losses = models::logreg_loss_path(toy.X, toy.y, 0.05, 1e-4, 120);
    for (std::size_t e = 1; e < losses.size(); ++e) CHECK(losses[e] <= losses[e - 1] + 1e-12);
}

TEST_CASE("sgd path replays under the same seed and moves the weights") {
    const auto toy = gaussian_toy(60, 3, 1.0, 33);
    models::SgdOptions opts;
    opts.epochs = 12;
    opts.seed = 5;
    const auto a = models::sgd_logreg_path(toy.X, toy.y, opts);
    const auto b = models::sgd_logreg_path(toy.X, toy.y, opts);
    REQUIRE(a.size() == 12);
    CHECK(a.back().w == b.back().w);
    CHECK(a.back().b == b.back().b);
    CHECK(a.front().w != a.back().w);
    opts.seed = 6;
    const auto c = models::sgd_logreg_path(toy.X, toy.y, opts);
    CHECK(c.back().w != a.back().w);
}

TEST_CASE("capacity ordering on duplicated rows, single-dataset smoke check") {
    // The corpus-level ordering is asserted in the acceptance suite; here a
    // single dataset only sanity-checks that a full tree out-memorizes gnb.
    corpus::SyntheticSpec spec;
    spec.n = 300;
    spec.p = 8;
    spec.class_sep = 0.4;
    spec.imbalance = 0.5;
    spec.seed = 77;
    const auto d = corpus::gen_synthetic(spec);

    auto train_auc = [&](Algorithm algo) {
        // contaminated training set: first 30 rows appear twice
        std::vector<int> rows;
        for (int i = 0; i < 300; ++i) rows.push_back(i);
        for (int i = 0; i < 30; ++i) rows.push_back(i);
        const auto X = d.features.take_rows(rows);
        const auto y = take(d.labels, rows);
        const auto model = models::fit(models::default_spec(algo, 3), X, y);
        Matrix dup = d.features.take_rows(std::vector<int>(rows.begin() + 300, rows.end()));
        const auto scores = models::predict_scores(model, dup);
        std::vector<int> dup_y(d.labels.begin(), d.labels.begin() + 30);
        return metrics::auc(scores, dup_y);
    };
    CHECK(train_auc(Algorithm::DT) >= train_auc(Algorithm::GNB));
}

} // TEST_SUITE
