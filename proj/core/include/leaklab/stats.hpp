#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace leaklab::stats {

// Placebo-run delta magnitude below which effects are treated as seed
// artifacts. Shared by injector guards, analysis flags and the acceptance
// suite.
inline constexpr double kNoiseFloor = 0.003;

// Two-sided 95% critical value of Student's t. Embedded table for
// df <= 200 (see tools that generated it in the test suite), z beyond.
double t_critical_975(int df);
inline constexpr double kZ975 = 1.959964;

struct EffectSummary {
    int n_datasets = 0;
    double mean_delta = 0.0;
    bool dz_defined = false; // false when the deltas have zero variance
    double dz = 0.0;
    double dz_ci_lo = 0.0;
    double dz_ci_hi = 0.0;
    double prevalence = 0.0; // fraction of datasets with delta > 0
    double median_delta = 0.0;
};

// Summary over per-dataset deltas (already averaged over repetitions).
// The d_z confidence interval is an M2-style t interval on the mean delta,
// rescaled by s: dz +/- t_{n-1,0.975}/sqrt(n).
EffectSummary effect_summary(std::span<const double> per_dataset_deltas);

// Groups (dataset_id, delta) repetitions: averages within dataset first.
EffectSummary effect_summary_grouped(const std::vector<std::pair<std::string, double>>& rep_deltas);

enum class CiMethod { M1_naive_z, M2_t, M3_nadeau_bengio, M4_bootstrap, M5_conservative_z, M6_corrected_resampled_t };

std::string to_string(CiMethod m);

struct Interval {
    CiMethod method;
    double lo = 0.0;
    double hi = 0.0;
    double center = 0.0;
};

struct CiInput {
    std::vector<double> fold_scores; // per-fold AUCs, length k
    int k = 0;
    int n_train = 0;
    int n_test = 0;
    std::vector<double> rep_scores; // k * reps fold AUCs, required for M6
};

// The six CV interval constructors. M4 needs a rerun callback that maps a
// resample index to the CV score of a full k-fold rerun on that bootstrap
// resample; its center is the median of the bootstrap draws so that
// lo <= center <= hi always holds.
Interval ci_estimate(CiMethod method, const CiInput& input,
                     const std::function<double(int)>& bootstrap_rerun = {},
                     int bootstrap_b = 500);

// Fraction of per-dataset intervals containing the per-dataset truth.
// The two maps must cover identical ids.
double coverage_eval(const std::map<std::string, Interval>& intervals,
                     const std::map<std::string, double>& truths);

// Expected-maximum growth rate of K draws: g(K) = sqrt(2 ln K).
double evt_g(double k);

struct DecompositionResult {
    double sigma_hat = 0.0;
    double noise_component = 0.0;
    double diversity_component = 0.0;
    double noise_fraction = 0.0; // clamped to [0, 1]
    bool clamped = false;
    int k_peek = 0;
    int k_seed = 0;
};

// Noise/diversity split of a selection effect: sigma_hat = delta_seed /
// g(K_seed), noise = min(sigma_hat * g(K_peek), delta_peek), diversity is
// the remainder. delta_seed must be >= 0.
DecompositionResult decompose_selection(double delta_peek, int k_peek,
                                        double delta_seed, int k_seed);

struct LogDoseFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0; // 0 by convention when the deltas are constant
};

// Least squares of delta on ln K over (K, delta) points; needs >= 3
// distinct K values. r2 is computed on the supplied (aggregated) points.
LogDoseFit fit_log_dose(std::span<const std::pair<double, double>> points);

struct FloorFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double c_ci_lo = 0.0; // profile-likelihood 95% interval for the floor
    double c_ci_hi = 0.0;
    double sse = 0.0;
};

// Fits delta = a * n^(-b) + c by a deterministic grid over b with
// closed-form (a, c) per b and golden-section refinement; c is constrained
// to [0, max delta]. Pass fixed_b to pin the exponent (the 0.5 variant).
FloorFit fit_floor_model(std::span<const std::pair<double, double>> points,
                         std::optional<double> fixed_b = std::nullopt);

// Benjamini-Hochberg step-up at level alpha; returns the rejected indices
// (ascending) into the input vector.
std::vector<int> fdr_bh(std::span<const double> p_values, double alpha);

// Spearman rank correlation (Pearson on average ranks). nullopt when either
// vector is constant.
std::optional<double> spearman_rho(std::span<const double> x, std::span<const double> y);

// One-sided exact sign test: P(Bin(n, 1/2) >= n_pos).
double sign_test_p(int n_pos, int n);

// Type-7 (linear interpolation) percentile, q in [0, 1]. Sorts a copy.
double percentile(std::vector<double> values, double q);

double mean(std::span<const double> v);
double sample_sd(std::span<const double> v);
double median(std::vector<double> values);

} // namespace leaklab::stats
