#include <doctest.h>

#include <cmath>
#include <vector>

#include "leaklab/rng.hpp"
#include "leaklab/stats.hpp"

using namespace leaklab;
using stats::CiMethod;

TEST_SUITE("stats") {

TEST_CASE("t table spot checks") {
    CHECK(stats::t_critical_975(1) == doctest::Approx(12.706205));
    CHECK(stats::t_critical_975(2) == doctest::Approx(4.302653));
    CHECK(stats::t_critical_975(4) == doctest::Approx(2.776445));
    CHECK(stats::t_critical_975(14) == doctest::Approx(2.144787));
    CHECK(stats::t_critical_975(200) == doctest::Approx(1.971896));
    CHECK(stats::t_critical_975(5000) == doctest::Approx(stats::kZ975));
}

TEST_CASE("effect summary worked example") {
    const auto s = stats::effect_summary(std::vector<double>{0.02, 0.04, 0.06});
    CHECK(s.mean_delta == doctest::Approx(0.04));
    CHECK(s.dz == doctest::Approx(2.0)); // s_delta = 0.02
    CHECK(s.prevalence == 1.0);
    CHECK(s.median_delta == doctest::Approx(0.04));
    CHECK(s.dz_ci_lo < s.dz);
    CHECK(s.dz < s.dz_ci_hi);
}

TEST_CASE("effect summary symmetry and degenerate variance") {
    const auto sym = stats::effect_summary(std::vector<double>{-0.03, 0.03, -0.01, 0.01});
    CHECK(sym.dz == doctest::Approx(0.0));
    CHECK(sym.prevalence == doctest::Approx(0.5));

    const auto flat = stats::effect_summary(std::vector<double>{0.0, 0.0, 0.0});
    CHECK_FALSE(flat.dz_defined);
    CHECK(flat.mean_delta == 0.0);
}

TEST_CASE("effect summary groups repetitions by dataset first") {
    const auto s = stats::effect_summary_grouped(
        {{"d1", 0.0}, {"d1", 0.04}, {"d2", 0.04}, {"d3", 0.06}});
    CHECK(s.n_datasets == 3);
    CHECK(s.mean_delta == doctest::Approx(0.04));
    CHECK(s.dz == doctest::Approx(2.0));
}

TEST_CASE("dz is invariant to a common shift of both arms") {
    // shifting auc_clean and auc_leaky together leaves deltas unchanged
    std::vector<double> deltas{0.01, 0.03, -0.02, 0.05};
    const auto a = stats::effect_summary(deltas);
    const auto b = stats::effect_summary(deltas); // deltas are already the pair difference
    CHECK(a.dz == b.dz);
}

TEST_CASE("worked ci formulas") {
    stats::CiInput input;
    input.fold_scores = {0.7, 0.8, 0.9}; // s = 0.1 exactly
    input.k = 3;
    input.n_train = 80;
    input.n_test = 20;

    const auto m1 = stats::ci_estimate(CiMethod::M1_naive_z, input);
    CHECK((m1.hi - m1.lo) / 2 == doctest::Approx(0.1131606527611667));
    CHECK(m1.center == doctest::Approx(0.8));

    const auto m2 = stats::ci_estimate(CiMethod::M2_t, input);
    CHECK((m2.hi - m2.lo) / 2 == doctest::Approx(4.302653 * 0.1 / std::sqrt(3.0)).epsilon(1e-6));

    const auto m5 = stats::ci_estimate(CiMethod::M5_conservative_z, input);
    CHECK((m5.hi - m5.lo) / 2 == doctest::Approx(0.196));

    // M3 variance multiplier at k=5, n_test/n_train = 1/4 is 0.45
    stats::CiInput in5;
    in5.fold_scores = {0.7, 0.75, 0.8, 0.85, 0.9};
    in5.k = 5;
    in5.n_train = 80;
    in5.n_test = 20;
    const auto m3 = stats::ci_estimate(CiMethod::M3_nadeau_bengio, in5);
    const double s = stats::sample_sd(in5.fold_scores);
    CHECK((m3.hi - m3.lo) / 2 ==
          doctest::Approx(stats::t_critical_975(4) * s * std::sqrt(0.45)).epsilon(1e-9));

    // M6 over k*reps scores with the corrected-resampled factor
    stats::CiInput in6 = in5;
    in6.rep_scores = {0.7, 0.75, 0.8, 0.85, 0.9, 0.71, 0.76, 0.81, 0.86, 0.91};
    const auto m6 = stats::ci_estimate(CiMethod::M6_corrected_resampled_t, in6);
    const double s10 = stats::sample_sd(in6.rep_scores);
    const double half = stats::t_critical_975(9) * s10 * std::sqrt(1.0 / 10 + 20.0 / 80.0);
    CHECK((m6.hi - m6.lo) / 2 == doctest::Approx(half).epsilon(1e-9));
}

TEST_CASE("zero-variance folds give zero-width intervals") {
    stats::CiInput input;
    input.fold_scores = {0.75, 0.75, 0.75, 0.75, 0.75};
    input.k = 5;
    input.n_train = 80;
    input.n_test = 20;
    for (auto m : {CiMethod::M1_naive_z, CiMethod::M2_t, CiMethod::M3_nadeau_bengio,
                   CiMethod::M5_conservative_z}) {
        const auto iv = stats::ci_estimate(m, input);
        CHECK(iv.lo == iv.hi);
        CHECK(iv.center == 0.75);
    }
}

TEST_CASE("m4 percentile interval over a rerun callback") {
    stats::CiInput input;
    input.fold_scores = {0.7, 0.8, 0.9};
    input.k = 3;
    input.n_train = 80;
    input.n_test = 20;
    auto rerun = [](int b) { return 0.5 + 0.001 * b; }; // 0.5 .. 0.999
    const auto iv = stats::ci_estimate(CiMethod::M4_bootstrap, input, rerun, 500);
    CHECK(iv.lo == doctest::Approx(0.5 + 0.001 * 0.025 * 499).epsilon(1e-6));
    CHECK(iv.hi == doctest::Approx(0.5 + 0.001 * 0.975 * 499).epsilon(1e-6));
    CHECK(iv.lo <= iv.center);
    CHECK(iv.center <= iv.hi);
    CHECK_THROWS_AS(stats::ci_estimate(CiMethod::M4_bootstrap, input), std::invalid_argument);
}

TEST_CASE("interval nesting for k >= 4") {
    // width(M5) >= width(M2) >= width(M1); at k=3 the t factor 4.30/sqrt(3)
    // exceeds 1.96 so the M5/M2 ordering genuinely starts at k=4.
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        stats::CiInput input;
        input.k = 4 + static_cast<int>(rng.uniform_index(8));
        for (int i = 0; i < input.k; ++i) input.fold_scores.push_back(0.5 + 0.4 * rng.uniform());
        input.n_train = 80;
        input.n_test = 20;
        const auto w = [&](CiMethod m) {
            const auto iv = stats::ci_estimate(m, input);
            return iv.hi - iv.lo;
        };
        CHECK(w(CiMethod::M5_conservative_z) >= w(CiMethod::M2_t) - 1e-12);
        CHECK(w(CiMethod::M2_t) >= w(CiMethod::M1_naive_z) - 1e-12);
    }
}

TEST_CASE("coverage_eval") {
    std::map<std::string, stats::Interval> ivs;
    std::map<std::string, double> truths;
    for (int i = 0; i < 10; ++i) {
        const std::string id = "d" + std::to_string(i);
        ivs[id] = {CiMethod::M2_t, 0.4, 0.6, 0.5};
        truths[id] = i < 7 ? 0.5 : 0.9;
    }
    CHECK(stats::coverage_eval(ivs, truths) == doctest::Approx(0.7));
    truths.erase("d9");
    CHECK_THROWS_AS(stats::coverage_eval(ivs, truths), std::invalid_argument);
}

TEST_CASE("evt growth rate") {
    CHECK(stats::evt_g(1) == 0.0);
    CHECK(stats::evt_g(10) == doctest::Approx(2.145966).epsilon(1e-6));
    CHECK(stats::evt_g(19) == doctest::Approx(2.426701).epsilon(1e-6));
    CHECK_THROWS_AS(stats::evt_g(0.5), std::invalid_argument);
}

TEST_CASE("selection decomposition") {
    const auto zero = stats::decompose_selection(0.04, 10, 0.0, 10);
    CHECK(zero.sigma_hat == 0.0);
    CHECK(zero.diversity_component == doctest::Approx(0.04));
    CHECK(zero.noise_fraction == 0.0);

    // equal K: g cancels, noise = delta_seed
    const auto even = stats::decompose_selection(0.04, 10, 0.02, 10);
    CHECK(even.noise_component == doctest::Approx(0.02));
    CHECK(even.noise_fraction == doctest::Approx(0.5));
    CHECK_FALSE(even.clamped);
    CHECK(even.noise_component + even.diversity_component == doctest::Approx(0.04));

    const auto clamped = stats::decompose_selection(0.01, 10, 0.05, 10);
    CHECK(clamped.clamped);
    CHECK(clamped.noise_fraction == 1.0);
    CHECK(clamped.diversity_component == doctest::Approx(0.0));

    CHECK_THROWS_AS(stats::decompose_selection(0.04, 10, -0.01, 10), std::invalid_argument);
    CHECK_THROWS_AS(stats::decompose_selection(0.04, 1, 0.01, 10), std::invalid_argument);
}

TEST_CASE("decomposition reconstruction identity holds when unclamped") {
    Rng rng(77);
    for (int trial = 0; trial < 200; ++trial) {
        const double peek = rng.uniform(0.0, 0.1);
        const double seed = rng.uniform(0.0, 0.1);
        const int kp = 2 + static_cast<int>(rng.uniform_index(30));
        const int ks = 2 + static_cast<int>(rng.uniform_index(30));
        const auto d = stats::decompose_selection(peek, kp, seed, ks);
        if (!d.clamped)
            CHECK(d.noise_component + d.diversity_component == doctest::Approx(peek).epsilon(1e-12));
    }
}

TEST_CASE("log dose fit recovers exact coefficients") {
    std::vector<std::pair<double, double>> pts;
    for (double k : {2.0, 5.0, 10.0, 20.0, 50.0}) pts.emplace_back(k, 0.003 * std::log(k) + 0.001);
    const auto fit = stats::fit_log_dose(pts);
    CHECK(fit.slope == doctest::Approx(0.003).epsilon(1e-9));
    CHECK(fit.intercept == doctest::Approx(0.001).epsilon(1e-9));
    CHECK(fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("log dose fit on the published five-point table") {
    // Frozen oracle values computed by ordinary least squares on
    // (ln K, delta): slope 0.0047549, intercept 0.0049190, r2 0.98613.
    const std::vector<std::pair<double, double>> pts{
        {5, 0.012}, {10, 0.016}, {25, 0.021}, {50, 0.024}, {100, 0.026}};
    const auto fit = stats::fit_log_dose(pts);
    CHECK(fit.slope == doctest::Approx(0.004754884487).epsilon(1e-8));
    CHECK(fit.intercept == doctest::Approx(0.004919026).epsilon(1e-6));
    CHECK(fit.r2 == doctest::Approx(0.9861288).epsilon(1e-6));
    // and the reported coefficients are reproduced within the stated bands
    CHECK(std::abs(fit.slope - 0.00455) <= 0.1 * 0.00455);
    CHECK(std::abs(fit.r2 - 0.994) <= 0.01);
}

TEST_CASE("log dose conventions and scale equivariance") {
    const std::vector<std::pair<double, double>> flat{{2, 0.01}, {5, 0.01}, {10, 0.01}};
    const auto fit = stats::fit_log_dose(flat);
    CHECK(fit.slope == doctest::Approx(0.0));
    CHECK(fit.r2 == 0.0);

    std::vector<std::pair<double, double>> pts{{2, 0.011}, {5, 0.019}, {10, 0.032}, {30, 0.041}};
    const auto base = stats::fit_log_dose(pts);
    for (auto& [k, d] : pts) d *= 3.0;
    const auto scaled = stats::fit_log_dose(pts);
    CHECK(scaled.slope == doctest::Approx(3.0 * base.slope));
    CHECK(scaled.intercept == doctest::Approx(3.0 * base.intercept));
    CHECK(scaled.r2 == doctest::Approx(base.r2));

    CHECK_THROWS_AS(stats::fit_log_dose(std::vector<std::pair<double, double>>{{2, 0.1}, {5, 0.2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        stats::fit_log_dose(std::vector<std::pair<double, double>>{{2, 0.1}, {2, 0.2}, {5, 0.3}}),
        std::invalid_argument);
}

TEST_CASE("floor model recovers a synthetic floor") {
    std::vector<std::pair<double, double>> pts;
    for (double n : {50.0, 100.0, 200.0, 500.0, 1000.0, 2000.0, 5000.0, 10000.0}) {
        double d = 0.5 * std::pow(n, -0.5) + 0.04;
        pts.emplace_back(n, d);
    }
    const auto fit = stats::fit_floor_model(pts);
    CHECK(std::abs(fit.c - 0.04) <= 0.005);
    CHECK(fit.b == doctest::Approx(0.5).epsilon(0.05));
    CHECK(fit.c_ci_lo <= fit.c);
    CHECK(fit.c <= fit.c_ci_hi);
}

TEST_CASE("floor model: zero-floor data keeps 0 in the c interval") {
    Rng rng(3);
    std::vector<std::pair<double, double>> pts;
    for (double n : {50.0, 100.0, 200.0, 500.0, 1000.0, 2000.0})
        pts.emplace_back(n, 0.8 * std::pow(n, -0.6) + 0.0005 * rng.normal());
    const auto fit = stats::fit_floor_model(pts);
    CHECK(fit.c_ci_lo <= 1e-9);
}

TEST_CASE("floor model two-parameter mode pins b") {
    std::vector<std::pair<double, double>> pts;
    for (double n : {50.0, 200.0, 1000.0, 5000.0}) pts.emplace_back(n, 0.3 * std::pow(n, -0.5) + 0.02);
    const auto fit = stats::fit_floor_model(pts, 0.5);
    CHECK(fit.b == 0.5);
    CHECK(fit.c == doctest::Approx(0.02).epsilon(0.05));
    CHECK_THROWS_AS(stats::fit_floor_model(std::vector<std::pair<double, double>>{{50, 0.1}, {100, 0.05}, {200, 0.02}}),
                    std::invalid_argument);
}

TEST_CASE("benjamini-hochberg step-up") {
    const auto all4 = stats::fdr_bh(std::vector<double>{0.01, 0.02, 0.03, 0.04}, 0.05);
    CHECK(all4 == std::vector<int>{0, 1, 2, 3});
    CHECK(stats::fdr_bh(std::vector<double>{1.0, 1.0, 1.0}, 0.05).empty());
    CHECK(stats::fdr_bh(std::vector<double>{0.04}, 0.05) == std::vector<int>{0});
    // step-up: a large p can drag smaller non-significant ones in
    const auto mixed = stats::fdr_bh(std::vector<double>{0.021, 0.9, 0.04, 0.001}, 0.05);
    CHECK(mixed == std::vector<int>{0, 2, 3});
    CHECK_THROWS_AS(stats::fdr_bh(std::vector<double>{1.2}, 0.05), std::invalid_argument);
}

TEST_CASE("spearman") {
    CHECK(*stats::spearman_rho(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 4, 9, 11}) ==
          doctest::Approx(1.0));
    CHECK(*stats::spearman_rho(std::vector<double>{1, 2, 3, 4}, std::vector<double>{9, 7, 3, 1}) ==
          doctest::Approx(-1.0));
    CHECK(*stats::spearman_rho(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}) ==
          doctest::Approx(0.8));
    CHECK_FALSE(stats::spearman_rho(std::vector<double>{1, 1, 1, 1}, std::vector<double>{1, 2, 3, 4})
                    .has_value());
}

TEST_CASE("sign test") {
    CHECK(stats::sign_test_p(0, 0) == 1.0);
    CHECK(stats::sign_test_p(10, 10) == doctest::Approx(std::pow(0.5, 10)));
    CHECK(stats::sign_test_p(5, 10) == doctest::Approx(0.623046875));
    CHECK(stats::sign_test_p(40, 50) < 0.01);
}

TEST_CASE("percentile and median") {
    CHECK(stats::percentile({1, 2, 3, 4, 5}, 0.5) == 3.0);
    CHECK(stats::percentile({1, 2, 3, 4}, 0.5) == doctest::Approx(2.5));
    CHECK(stats::percentile({1, 2, 3, 4, 5}, 0.0) == 1.0);
    CHECK(stats::percentile({1, 2, 3, 4, 5}, 1.0) == 5.0);
    CHECK(stats::median({3, 1, 2}) == 2.0);
    CHECK(stats::median({4, 1, 2, 3}) == doctest::Approx(2.5));
}

TEST_CASE("estimators match brute force on tiny inputs") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_index(9));
        std::vector<double> deltas(static_cast<std::size_t>(n));
        for (double& d : deltas) d = rng.uniform(-0.05, 0.1);
        const auto s = stats::effect_summary(deltas);
        double mean = 0;
        for (double d : deltas) mean += d;
        mean /= n;
        double ss = 0;
        for (double d : deltas) ss += (d - mean) * (d - mean);
        const double sd = std::sqrt(ss / (n - 1));
        CHECK(s.mean_delta == doctest::Approx(mean).epsilon(1e-12));
        if (sd > 0) CHECK(s.dz == doctest::Approx(mean / sd).epsilon(1e-12));
    }
}

} // TEST_SUITE
