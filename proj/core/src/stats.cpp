#include "leaklab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace leaklab::stats {

namespace {

// t_{df, 0.975} for df = 1..200, generated offline from the standard
// t quantile function and frozen here.
constexpr double kT975[200] = {
    12.706205, 4.302653, 3.182446, 2.776445, 2.570582, 2.446912, 2.364624, 2.306004,
    2.262157, 2.228139, 2.200985, 2.178813, 2.160369, 2.144787, 2.131450, 2.119905,
    2.109816, 2.100922, 2.093024, 2.085963, 2.079614, 2.073873, 2.068658, 2.063899,
    2.059539, 2.055529, 2.051831, 2.048407, 2.045230, 2.042272, 2.039513, 2.036933,
    2.034515, 2.032245, 2.030108, 2.028094, 2.026192, 2.024394, 2.022691, 2.021075,
    2.019541, 2.018082, 2.016692, 2.015368, 2.014103, 2.012896, 2.011741, 2.010635,
    2.009575, 2.008559, 2.007584, 2.006647, 2.005746, 2.004879, 2.004045, 2.003241,
    2.002465, 2.001717, 2.000995, 2.000298, 1.999624, 1.998972, 1.998341, 1.997730,
    1.997138, 1.996564, 1.996008, 1.995469, 1.994945, 1.994437, 1.993943, 1.993464,
    1.992997, 1.992543, 1.992102, 1.991673, 1.991254, 1.990847, 1.990450, 1.990063,
    1.989686, 1.989319, 1.988960, 1.988610, 1.988268, 1.987934, 1.987608, 1.987290,
    1.986979, 1.986675, 1.986377, 1.986086, 1.985802, 1.985523, 1.985251, 1.984984,
    1.984723, 1.984467, 1.984217, 1.983972, 1.983731, 1.983495, 1.983264, 1.983038,
    1.982815, 1.982597, 1.982383, 1.982173, 1.981967, 1.981765, 1.981567, 1.981372,
    1.981180, 1.980992, 1.980808, 1.980626, 1.980448, 1.980272, 1.980100, 1.979930,
    1.979764, 1.979600, 1.979439, 1.979280, 1.979124, 1.978971, 1.978820, 1.978671,
    1.978524, 1.978380, 1.978239, 1.978099, 1.977961, 1.977826, 1.977692, 1.977561,
    1.977431, 1.977304, 1.977178, 1.977054, 1.976931, 1.976811, 1.976692, 1.976575,
    1.976460, 1.976346, 1.976233, 1.976122, 1.976013, 1.975905, 1.975799, 1.975694,
    1.975590, 1.975488, 1.975387, 1.975288, 1.975189, 1.975092, 1.974996, 1.974902,
    1.974808, 1.974716, 1.974625, 1.974535, 1.974446, 1.974358, 1.974271, 1.974185,
    1.974100, 1.974017, 1.973934, 1.973852, 1.973771, 1.973691, 1.973612, 1.973534,
    1.973457, 1.973381, 1.973305, 1.973231, 1.973157, 1.973084, 1.973012, 1.972941,
    1.972870, 1.972800, 1.972731, 1.972663, 1.972595, 1.972528, 1.972462, 1.972396,
    1.972332, 1.972268, 1.972204, 1.972141, 1.972079, 1.972017, 1.971957, 1.971896,
};

constexpr double kChi2_1_95 = 3.841459;

} // namespace

double t_critical_975(int df) {
    if (df < 1) throw std::invalid_argument("t_critical_975: df must be >= 1");
    if (df <= 200) return kT975[df - 1];
    return kZ975;
}

double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean: empty input");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
    if (v.size() < 2) throw std::invalid_argument("sample_sd: need >= 2 values");
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("percentile: empty input");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("percentile: q must be in [0, 1]");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

EffectSummary effect_summary(std::span<const double> per_dataset_deltas) {
    if (per_dataset_deltas.size() < 2)
        throw std::invalid_argument("effect_summary: need >= 2 datasets");
    EffectSummary s;
    s.n_datasets = static_cast<int>(per_dataset_deltas.size());
    s.mean_delta = mean(per_dataset_deltas);
    const double sd = sample_sd(per_dataset_deltas);
    int positive = 0;
    for (double d : per_dataset_deltas) positive += (d > 0.0);
    s.prevalence = static_cast<double>(positive) / s.n_datasets;
    s.median_delta = median({per_dataset_deltas.begin(), per_dataset_deltas.end()});
    if (sd > 0.0) {
        s.dz_defined = true;
        s.dz = s.mean_delta / sd;
        const double half = t_critical_975(s.n_datasets - 1) / std::sqrt(static_cast<double>(s.n_datasets));
        s.dz_ci_lo = s.dz - half;
        s.dz_ci_hi = s.dz + half;
    }
    return s;
}

EffectSummary effect_summary_grouped(const std::vector<std::pair<std::string, double>>& rep_deltas) {
    std::map<std::string, std::pair<double, int>> acc;
    for (const auto& [id, d] : rep_deltas) {
        auto& [sum, count] = acc[id];
        sum += d;
        ++count;
    }
    std::vector<double> per_dataset;
    per_dataset.reserve(acc.size());
    for (const auto& [id, sc] : acc) per_dataset.push_back(sc.first / sc.second);
    return effect_summary(per_dataset);
}

std::string to_string(CiMethod m) {
    switch (m) {
        case CiMethod::M1_naive_z: return "M1_naive_z";
        case CiMethod::M2_t: return "M2_t";
        case CiMethod::M3_nadeau_bengio: return "M3_nadeau_bengio";
        case CiMethod::M4_bootstrap: return "M4_bootstrap";
        case CiMethod::M5_conservative_z: return "M5_conservative_z";
        case CiMethod::M6_corrected_resampled_t: return "M6_corrected_resampled_t";
    }
    return "?";
}

Interval ci_estimate(CiMethod method, const CiInput& input,
                     const std::function<double(int)>& bootstrap_rerun, int bootstrap_b) {
    if (input.k < 2) throw std::invalid_argument("ci_estimate: k must be >= 2");
    if (static_cast<int>(input.fold_scores.size()) != input.k)
        throw std::invalid_argument("ci_estimate: fold_scores must have length k");
    if (input.n_train <= 0 || input.n_test <= 0)
        throw std::invalid_argument("ci_estimate: n_train and n_test must be > 0");

    const double m = mean(input.fold_scores);
    const double s = sample_sd(input.fold_scores);
    const double sqrt_k = std::sqrt(static_cast<double>(input.k));
    const double nb_factor = std::sqrt(1.0 / input.k + static_cast<double>(input.n_test) / input.n_train);

    Interval iv;
    iv.method = method;
    iv.center = m;
    switch (method) {
        case CiMethod::M1_naive_z: {
            const double half = kZ975 * s / sqrt_k;
            iv.lo = m - half;
            iv.hi = m + half;
            break;
        }
        case CiMethod::M2_t: {
            const double half = t_critical_975(input.k - 1) * s / sqrt_k;
            iv.lo = m - half;
            iv.hi = m + half;
            break;
        }
        case CiMethod::M3_nadeau_bengio: {
            const double half = t_critical_975(input.k - 1) * s * nb_factor;
            iv.lo = m - half;
            iv.hi = m + half;
            break;
        }
        case CiMethod::M4_bootstrap: {
            if (!bootstrap_rerun) throw std::invalid_argument("ci_estimate: M4 requires a rerun callback");
            std::vector<double> draws(static_cast<std::size_t>(bootstrap_b));
            for (int b = 0; b < bootstrap_b; ++b) draws[static_cast<std::size_t>(b)] = bootstrap_rerun(b);
            iv.lo = percentile(draws, 0.025);
            iv.hi = percentile(draws, 0.975);
            iv.center = percentile(draws, 0.5);
            break;
        }
        case CiMethod::M5_conservative_z: {
            const double half = kZ975 * s;
            iv.lo = m - half;
            iv.hi = m + half;
            break;
        }
        case CiMethod::M6_corrected_resampled_t: {
            if (input.rep_scores.size() < 2 || input.rep_scores.size() % static_cast<std::size_t>(input.k) != 0)
                throw std::invalid_argument("ci_estimate: M6 needs k*reps fold scores");
            const double mm = mean(input.rep_scores);
            const double ss = sample_sd(input.rep_scores);
            const int total = static_cast<int>(input.rep_scores.size());
            const double factor = std::sqrt(1.0 / total + static_cast<double>(input.n_test) / input.n_train);
            const double half = t_critical_975(total - 1) * ss * factor;
            iv.center = mm;
            iv.lo = mm - half;
            iv.hi = mm + half;
            break;
        }
    }
    return iv;
}

double coverage_eval(const std::map<std::string, Interval>& intervals,
                     const std::map<std::string, double>& truths) {
    if (intervals.size() != truths.size())
        throw std::invalid_argument("coverage_eval: id mismatch");
    int covered = 0;
    for (const auto& [id, iv] : intervals) {
        auto it = truths.find(id);
        if (it == truths.end()) throw std::invalid_argument("coverage_eval: id mismatch: " + id);
        covered += (iv.lo <= it->second && it->second <= iv.hi);
    }
    return static_cast<double>(covered) / static_cast<double>(intervals.size());
}

double evt_g(double k) {
    if (k < 1.0) throw std::invalid_argument("evt_g: K must be >= 1");
    return std::sqrt(2.0 * std::log(k));
}

DecompositionResult decompose_selection(double delta_peek, int k_peek,
                                        double delta_seed, int k_seed) {
    if (k_peek < 2 || k_seed < 2)
        throw std::invalid_argument("decompose_selection: K_peek and K_seed must be >= 2");
    if (delta_seed < 0.0)
        throw std::invalid_argument("decompose_selection: delta_seed must be >= 0");
    DecompositionResult r;
    r.k_peek = k_peek;
    r.k_seed = k_seed;
    r.sigma_hat = delta_seed / evt_g(static_cast<double>(k_seed));
    const double predicted = r.sigma_hat * evt_g(static_cast<double>(k_peek));
    r.noise_component = std::min(predicted, delta_peek);
    r.clamped = predicted > delta_peek;
    r.diversity_component = delta_peek - r.noise_component;
    if (delta_peek > 0.0)
        r.noise_fraction = std::clamp(r.noise_component / delta_peek, 0.0, 1.0);
    else
        r.noise_fraction = r.clamped ? 1.0 : 0.0;
    return r;
}

LogDoseFit fit_log_dose(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw std::invalid_argument("fit_log_dose: need >= 3 points");
    std::vector<double> ks;
    for (const auto& [k, d] : points) {
        if (k < 1.0) throw std::invalid_argument("fit_log_dose: K must be >= 1");
        ks.push_back(k);
    }
    std::sort(ks.begin(), ks.end());
    if (std::adjacent_find(ks.begin(), ks.end()) != ks.end())
        throw std::invalid_argument("fit_log_dose: K values must be distinct");

    const auto n = static_cast<double>(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [k, d] : points) {
        const double x = std::log(k);
        sx += x;
        sy += d;
        sxx += x * x;
        sxy += x * d;
    }
    const double denom = n * sxx - sx * sx;
    LogDoseFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ybar = sy / n;
    double ss_res = 0, ss_tot = 0;
    for (const auto& [k, d] : points) {
        const double pred = fit.intercept + fit.slope * std::log(k);
        ss_res += (d - pred) * (d - pred);
        ss_tot += (d - ybar) * (d - ybar);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    return fit;
}

namespace {

struct FloorEval {
    double a = 0.0;
    double c = 0.0;
    double sse = 0.0;
};

// For fixed b (and optionally fixed c) the model is linear: closed-form
// least squares with c constrained to [0, c_max].
FloorEval eval_floor_b(std::span<const std::pair<double, double>> pts, double b,
                       std::optional<double> fixed_c, double c_max) {
    double sxx = 0, sx = 0, sxd = 0, sd = 0;
    const auto n = static_cast<double>(pts.size());
    std::vector<double> xs(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        xs[i] = std::pow(pts[i].first, -b);
        sxx += xs[i] * xs[i];
        sx += xs[i];
        sxd += xs[i] * pts[i].second;
        sd += pts[i].second;
    }
    FloorEval out;
    if (fixed_c) {
        out.c = *fixed_c;
        out.a = sxx > 0 ? (sxd - out.c * sx) / sxx : 0.0;
    } else {
        const double denom = n * sxx - sx * sx;
        if (std::abs(denom) < 1e-300) {
            out.c = std::clamp(sd / n, 0.0, c_max);
            out.a = 0.0;
        } else {
            out.a = (n * sxd - sx * sd) / denom;
            out.c = (sd - out.a * sx) / n;
            if (out.c < 0.0 || out.c > c_max) {
                out.c = std::clamp(out.c, 0.0, c_max);
                out.a = sxx > 0 ? (sxd - out.c * sx) / sxx : 0.0;
            }
        }
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double r = pts[i].second - (out.a * xs[i] + out.c);
        out.sse += r * r;
    }
    return out;
}

double golden_refine_b(std::span<const std::pair<double, double>> pts, double lo, double hi,
                       std::optional<double> fixed_c, double c_max) {
    constexpr double phi = 0.6180339887498949;
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = eval_floor_b(pts, x1, fixed_c, c_max).sse;
    double f2 = eval_floor_b(pts, x2, fixed_c, c_max).sse;
    for (int it = 0; it < 60; ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = eval_floor_b(pts, x1, fixed_c, c_max).sse;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = eval_floor_b(pts, x2, fixed_c, c_max).sse;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

FloorFit fit_floor_model(std::span<const std::pair<double, double>> points,
                         std::optional<double> fixed_b) {
    if (points.size() < 4) throw std::invalid_argument("fit_floor_model: need >= 4 points");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].first <= 0) throw std::invalid_argument("fit_floor_model: n must be positive");
        if (i > 0 && points[i].first <= points[i - 1].first)
            throw std::invalid_argument("fit_floor_model: n must be strictly increasing");
    }
    double c_max = 0.0;
    for (const auto& [n, d] : points) c_max = std::max(c_max, d);
    c_max = std::max(c_max, 1e-9);

    FloorFit fit;
    if (fixed_b) {
        fit.b = *fixed_b;
    } else {
        double best_sse = std::numeric_limits<double>::infinity();
        double best_b = 0.1;
        for (int i = 0; i <= 140; ++i) {
            const double b = 0.1 + 0.01 * i;
            const double sse = eval_floor_b(points, b, std::nullopt, c_max).sse;
            if (sse < best_sse) {
                best_sse = sse;
                best_b = b;
            }
        }
        fit.b = golden_refine_b(points, std::max(0.1, best_b - 0.02), std::min(1.5, best_b + 0.02),
                                std::nullopt, c_max);
    }
    const auto at_b = eval_floor_b(points, fit.b, std::nullopt, c_max);
    fit.a = at_b.a;
    fit.c = at_b.c;
    fit.sse = at_b.sse;

    // Profile likelihood over c: for each candidate c re-optimize (a, b) and
    // keep the c values whose SSE passes the chi-square(1) likelihood ratio.
    const auto n_pts = static_cast<double>(points.size());
    const double sse_best = std::max(fit.sse, 1e-30);
    double lo = fit.c, hi = fit.c;
    const int steps = static_cast<int>(c_max / 0.0005) + 1;
    for (int i = 0; i <= steps; ++i) {
        const double c = std::min(c_max, 0.0005 * i);
        double sse_c;
        if (fixed_b) {
            sse_c = eval_floor_b(points, *fixed_b, c, c_max).sse;
        } else {
            double best = std::numeric_limits<double>::infinity();
            for (int bi = 0; bi <= 140; ++bi)
                best = std::min(best, eval_floor_b(points, 0.1 + 0.01 * bi, c, c_max).sse);
            sse_c = best;
        }
        if (n_pts * std::log(std::max(sse_c, 1e-30) / sse_best) <= kChi2_1_95) {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
    }
    fit.c_ci_lo = lo;
    fit.c_ci_hi = hi;
    return fit;
}

std::vector<int> fdr_bh(std::span<const double> p_values, double alpha) {
    for (double p : p_values)
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("fdr_bh: p values must be in [0, 1]");
    const int m = static_cast<int>(p_values.size());
    std::vector<int> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return p_values[static_cast<std::size_t>(a)] < p_values[static_cast<std::size_t>(b)];
    });
    int cut = -1;
    for (int i = m - 1; i >= 0; --i) {
        if (p_values[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] <=
            alpha * static_cast<double>(i + 1) / m) {
            cut = i;
            break;
        }
    }
    std::vector<int> rejected(order.begin(), order.begin() + (cut + 1));
    std::sort(rejected.begin(), rejected.end());
    return rejected;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

} // namespace

std::optional<double> spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman_rho: length mismatch");
    if (x.size() < 3) throw std::invalid_argument("spearman_rho: need >= 3 points");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double mx = mean(rx), my = mean(ry);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

double sign_test_p(int n_pos, int n) {
    if (n < 0 || n_pos < 0 || n_pos > n) throw std::invalid_argument("sign_test_p: bad counts");
    if (n == 0) return 1.0;
    double p = 0.0;
    for (int i = n_pos; i <= n; ++i) {
        const double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                                std::lgamma(n - i + 1.0) - n * std::log(2.0);
        p += std::exp(log_term);
    }
    return std::min(1.0, p);
}

} // namespace leaklab::stats
