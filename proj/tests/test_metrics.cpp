#include <doctest.h>

#include <cmath>
#include <vector>

#include "leaklab/metrics.hpp"
#include "leaklab/rng.hpp"

using namespace leaklab;
using metrics::Metric;

namespace {

// Independent oracle: O(n^2) pairwise count, ties at 1/2.
double auc_pairwise(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0;
    long pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

} // namespace

TEST_SUITE("metrics") {

TEST_CASE("worked auc example") {
    // 4 usable (pos, neg) pairs, 3 wins: 2x2 pairs, 0.35>0.1, 0.35<0.4, 0.8>both
    const std::vector<double> scores{0.1, 0.4, 0.35, 0.8};
    const std::vector<int> labels{0, 0, 1, 1};
    CHECK(auc_pairwise(scores, labels) == doctest::Approx(0.75));
    CHECK(metrics::auc(scores, labels) == doctest::Approx(0.75));
}

TEST_CASE("degenerate aucs") {
    CHECK(metrics::auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<int>{0, 0, 1, 1}) == 1.0);
    CHECK(metrics::auc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, std::vector<int>{0, 1, 0, 1}) == 0.5);
    CHECK_THROWS_AS(metrics::auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}),
                    std::invalid_argument);
}

TEST_CASE("rank implementation equals the pairwise oracle on 1000 random instances") {
    Rng rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 4 + static_cast<int>(rng.uniform_index(47));
        std::vector<double> scores(static_cast<std::size_t>(n));
        std::vector<int> labels(static_cast<std::size_t>(n));
        int pos = 0;
        for (int i = 0; i < n; ++i) {
            // coarse grid forces plenty of ties
            scores[static_cast<std::size_t>(i)] = std::floor(rng.uniform() * 8) / 8.0;
            labels[static_cast<std::size_t>(i)] = rng.uniform() < 0.4 ? 1 : 0;
            pos += labels[static_cast<std::size_t>(i)];
        }
        if (pos == 0) labels[0] = 1;
        if (pos == n) labels[0] = 0;
        CHECK(metrics::auc(scores, labels) == doctest::Approx(auc_pairwise(scores, labels)).epsilon(1e-12));
    }
}

TEST_CASE("auc complement and monotone-transform invariance") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 10 + static_cast<int>(rng.uniform_index(30));
        std::vector<double> scores(static_cast<std::size_t>(n));
        std::vector<int> labels(static_cast<std::size_t>(n)), flipped(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            scores[static_cast<std::size_t>(i)] = rng.uniform(); // ties a.s. absent
            labels[static_cast<std::size_t>(i)] = i % 2;
            flipped[static_cast<std::size_t>(i)] = 1 - i % 2;
        }
        const double a = metrics::auc(scores, labels);
        CHECK(a + metrics::auc(scores, flipped) == doctest::Approx(1.0));
        auto warped = scores;
        for (double& s : warped) s = std::exp(3.0 * s) - 0.5; // strictly monotone
        CHECK(metrics::auc(warped, labels) == doctest::Approx(a));
    }
}

TEST_CASE("confusion metrics on the worked 2/1/1/6 table") {
    // scores chosen to produce TP=2 FP=1 FN=1 TN=6 at threshold 0.5
    std::vector<double> scores{0.9, 0.8, 0.7, 0.2, 0.1, 0.1, 0.1, 0.2, 0.3, 0.4};
    std::vector<int> labels{1, 1, 0, 1, 0, 0, 0, 0, 0, 0};
    const auto m = metrics::confusion_metrics(scores, labels);
    auto get = [&](Metric metric) {
        for (const auto& v : m)
            if (v.metric == metric) return v.value;
        FAIL("missing metric");
        return 0.0;
    };
    CHECK(get(Metric::precision) == doctest::Approx(2.0 / 3.0));
    CHECK(get(Metric::recall) == doctest::Approx(2.0 / 3.0));
    CHECK(get(Metric::F1) == doctest::Approx(2.0 / 3.0));
    CHECK(get(Metric::accuracy) == doctest::Approx(0.8));
    // MCC = (2*6 - 1*1) / sqrt(3*3*7*7) = 11/21
    CHECK(get(Metric::MCC) == doctest::Approx(11.0 / 21.0));
}

TEST_CASE("confusion metric conventions at degenerate marginals") {
    std::vector<double> perfect{0.9, 0.9, 0.1, 0.1};
    std::vector<int> labels{1, 1, 0, 0};
    for (const auto& v : metrics::confusion_metrics(perfect, labels)) CHECK(v.value == 1.0);

    std::vector<double> all_neg{0.1, 0.2, 0.3, 0.4};
    const auto m = metrics::confusion_metrics(all_neg, labels);
    for (const auto& v : m) {
        if (v.metric == Metric::recall || v.metric == Metric::precision || v.metric == Metric::F1 ||
            v.metric == Metric::MCC)
            CHECK(v.value == 0.0);
    }
}

TEST_CASE("ranking flips") {
    auto mv = [](Metric m, double v) { return metrics::MetricValue{m, v, 10}; };
    std::vector<metrics::MetricValue> a{mv(Metric::AUC, 0.9), mv(Metric::F1, 0.8)};
    std::vector<metrics::MetricValue> b{mv(Metric::AUC, 0.8), mv(Metric::F1, 0.7)};
    CHECK_FALSE(metrics::ranking_flip(a, b).flip);

    std::vector<metrics::MetricValue> c{mv(Metric::AUC, 0.8), mv(Metric::F1, 0.9)};
    CHECK(metrics::ranking_flip(a, c).flip);

    // exact tie on one metric: no flip, tie flag set
    std::vector<metrics::MetricValue> d{mv(Metric::AUC, 0.9), mv(Metric::F1, 0.9)};
    std::vector<metrics::MetricValue> e{mv(Metric::AUC, 0.9), mv(Metric::F1, 0.7)};
    const auto rep = metrics::ranking_flip(d, e);
    CHECK_FALSE(rep.flip);
    CHECK(rep.tie);

    std::vector<metrics::MetricValue> wrong{mv(Metric::AUC, 0.9)};
    CHECK_THROWS_AS(metrics::ranking_flip(a, wrong), std::invalid_argument);
}

} // TEST_SUITE
