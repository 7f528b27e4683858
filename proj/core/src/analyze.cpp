#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "leaklab/harness.hpp"

namespace leaklab::harness {

namespace {

using RepKey = std::pair<std::string, int>; // dataset_id, rep

double param_num(const RunRecord& r, const std::string& key, double fallback) {
    auto it = r.params.find(key);
    if (it == r.params.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        return fallback;
    }
}

std::string param_str(const RunRecord& r, const std::string& key, const std::string& fallback) {
    auto it = r.params.find(key);
    return it == r.params.end() ? fallback : it->second;
}

// Per-dataset means of delta over repetitions.
std::vector<std::pair<std::string, double>> dataset_means(const std::vector<const RunRecord*>& records) {
    std::map<std::string, std::pair<double, int>> acc;
    for (const auto* r : records) {
        auto& [sum, count] = acc[r->dataset_id];
        sum += r->delta;
        ++count;
    }
    std::vector<std::pair<std::string, double>> out;
    out.reserve(acc.size());
    for (const auto& [id, sc] : acc) out.emplace_back(id, sc.first / sc.second);
    return out;
}

std::optional<stats::EffectSummary> try_summary(const std::vector<std::pair<std::string, double>>& means) {
    if (means.size() < 2) return std::nullopt;
    std::vector<double> deltas;
    deltas.reserve(means.size());
    for (const auto& [id, d] : means) deltas.push_back(d);
    return stats::effect_summary(deltas);
}

DosePoint dose_point(double dose, const std::vector<const RunRecord*>& records) {
    const auto means = dataset_means(records);
    std::vector<double> deltas;
    for (const auto& [id, d] : means) deltas.push_back(d);
    DosePoint pt;
    pt.dose = dose;
    pt.n = static_cast<int>(deltas.size());
    pt.mean_delta = stats::mean(deltas);
    if (deltas.size() >= 2) {
        const double sd = stats::sample_sd(deltas);
        const double half = stats::t_critical_975(pt.n - 1) * sd / std::sqrt(static_cast<double>(pt.n));
        pt.ci_lo = pt.mean_delta - half;
        pt.ci_hi = pt.mean_delta + half;
    } else {
        pt.ci_lo = pt.ci_hi = pt.mean_delta;
    }
    return pt;
}

} // namespace

Report analyze(const std::string& records_path, const AnalyzeOptions& opts) {
    std::ifstream in(records_path);
    if (!in) throw std::invalid_argument("analyze: cannot open " + records_path);

    Report report;
    std::vector<RunRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
            auto parsed = parse_jsonl(line);
            if (parsed.skip) {
                ++report.n_skips;
                continue;
            }
            if (!parsed.record) {
                ++report.n_corrupt_lines;
                continue;
            }
            auto& r = *parsed.record;
            if (opts.experiment_filter && r.exp_id != *opts.experiment_filter) continue;
            if (opts.split_filter && r.split != *opts.split_filter) continue;
            records.push_back(std::move(r));
        } catch (const std::exception&) {
            ++report.n_corrupt_lines;
        }
    }
    report.n_records = static_cast<int>(records.size());
    if (!records.empty()) report.run_id = records.front().run_id;

    std::map<std::string, std::vector<const RunRecord*>> by_exp;
    for (const auto& r : records) by_exp[r.exp_id].push_back(&r);

    // Per-experiment effect summaries on pooled and per-split subsets.
    for (const auto& [exp, recs] : by_exp) {
        ExperimentReport er;
        er.exp_id = exp;
        er.leak_class = recs.front()->leak_class;
        er.dataset_deltas = dataset_means(recs);
        if (auto s = try_summary(er.dataset_deltas)) er.by_split["pooled"] = *s;
        for (const char* split : {"discovery", "confirmation"}) {
            std::vector<const RunRecord*> subset;
            for (const auto* r : recs)
                if (r->split == split) subset.push_back(r);
            if (auto s = try_summary(dataset_means(subset))) er.by_split[split] = *s;
        }
        report.experiments.push_back(std::move(er));
    }

    // Discovery/confirmation d_z gap where both splits summarized.
    for (const auto& er : report.experiments) {
        auto d = er.by_split.find("discovery");
        auto c = er.by_split.find("confirmation");
        if (d != er.by_split.end() && c != er.by_split.end() && d->second.dz_defined &&
            c->second.dz_defined)
            report.extras["gap_dz_" + er.exp_id] = d->second.dz - c->second.dz;
    }

    // Dose-response curves.
    struct DoseSpec {
        const char* exp;
        const char* param;
        bool split_by_algorithm;
    };
    for (const auto& ds : {DoseSpec{"B", "k", false}, DoseSpec{"AQ", "k", false},
                           DoseSpec{"AP", "K", true}, DoseSpec{"H", "rate", true}}) {
        auto it = by_exp.find(ds.exp);
        if (it == by_exp.end()) continue;
        std::map<std::pair<std::string, double>, std::vector<const RunRecord*>> groups;
        for (const auto* r : it->second) {
            const std::string algo = ds.split_by_algorithm ? r->algorithm : "";
            groups[{algo, param_num(*r, ds.param, 0.0)}].push_back(r);
        }
        for (const auto& [key, recs] : groups) {
            const std::string curve = key.first.empty() ? std::string(ds.exp)
                                                        : std::string(ds.exp) + ":" + key.first;
            report.dose_curves[curve].push_back(dose_point(key.second, recs));
        }
    }
    for (auto& [curve, points] : report.dose_curves)
        std::sort(points.begin(), points.end(),
                  [](const DosePoint& a, const DosePoint& b) { return a.dose < b.dose; });

    // n-scaling curves per mechanism.
    if (auto it = by_exp.find("AN"); it != by_exp.end()) {
        std::map<std::pair<std::string, double>, std::vector<const RunRecord*>> groups;
        for (const auto* r : it->second)
            groups[{param_str(*r, "mech", "?"), param_num(*r, "n_sub", 0)}].push_back(r);
        for (const auto& [key, recs] : groups)
            report.nscaling[key.first].push_back(dose_point(key.second, recs));
        for (auto& [mech, points] : report.nscaling)
            std::sort(points.begin(), points.end(),
                      [](const DosePoint& a, const DosePoint& b) { return a.dose < b.dose; });

        // Noise/diversity decomposition wherever peek and seed share a size.
        const auto peek_it = report.nscaling.find("peek");
        const auto seed_it = report.nscaling.find("seed");
        if (peek_it != report.nscaling.end() && seed_it != report.nscaling.end()) {
            int k_peek = 5, k_seed = 10;
            for (const auto* r : it->second) {
                if (param_str(*r, "mech", "") == "peek") k_peek = static_cast<int>(param_num(*r, "k", 5));
                if (param_str(*r, "mech", "") == "seed") k_seed = static_cast<int>(param_num(*r, "K", 10));
            }
            for (const auto& pp : peek_it->second)
                for (const auto& sp : seed_it->second)
                    if (pp.dose == sp.dose)
                        report.decomposition.emplace_back(
                            pp.dose, stats::decompose_selection(pp.mean_delta, k_peek,
                                                                std::max(0.0, sp.mean_delta), k_seed));
        }

        // Floor-model fits over the n-scaling means (needs >= 4 sizes).
        for (const char* mech : {"peek", "seed"}) {
            auto m = report.nscaling.find(mech);
            if (m == report.nscaling.end() || m->second.size() < 4) continue;
            std::vector<std::pair<double, double>> pts;
            for (const auto& pt : m->second) pts.emplace_back(pt.dose, pt.mean_delta);
            try {
                const auto fit = stats::fit_floor_model(pts);
                report.extras[std::string("an_floor_c_") + mech] = fit.c;
                report.extras[std::string("an_floor_c_lo_") + mech] = fit.c_ci_lo;
                report.extras[std::string("an_floor_c_hi_") + mech] = fit.c_ci_hi;
                report.extras[std::string("an_floor_b_") + mech] = fit.b;
            } catch (const std::exception&) {
                // unsorted or degenerate points: no fit row
            }
        }
    }

    // Corpus-level decomposition from B(k=10) and AP(RF, K=10).
    {
        double peek10 = 0, seed10 = 0;
        bool have_peek = false, have_seed = false;
        if (auto it = report.dose_curves.find("B"); it != report.dose_curves.end())
            for (const auto& pt : it->second)
                if (pt.dose == 10.0) {
                    peek10 = pt.mean_delta;
                    have_peek = true;
                }
        if (auto it = report.dose_curves.find("AP:RF"); it != report.dose_curves.end())
            for (const auto& pt : it->second)
                if (pt.dose == 10.0) {
                    seed10 = pt.mean_delta;
                    have_seed = true;
                }
        if (have_peek && have_seed)
            report.decomposition.emplace_back(
                0.0, stats::decompose_selection(peek10, 10, std::max(0.0, seed10), 10));
    }

    // AO coverage per (method, algorithm).
    if (auto it = by_exp.find("AO"); it != by_exp.end()) {
        std::map<std::string, std::pair<int, int>> acc; // key -> (covered, total)
        for (const auto* r : it->second) {
            const std::string key = param_str(*r, "method", "?") + ":" + r->algorithm;
            const double lo = param_num(*r, "x_ci_lo", 0.0);
            const double hi = param_num(*r, "x_ci_hi", 0.0);
            const double truth = r->auc_leaky;
            auto& [covered, total] = acc[key];
            covered += (lo <= truth && truth <= hi);
            ++total;
        }
        for (const auto& [key, ct] : acc) {
            report.coverage[key] = static_cast<double>(ct.first) / ct.second;
            report.coverage_n[key] = ct.second;
        }
    }

    // AP extras: LR determinism check and the RF logarithmic dose fit.
    if (auto it = report.dose_curves.find("AP:LR"); it != report.dose_curves.end()) {
        double max_abs = 0.0;
        for (const auto& pt : it->second) max_abs = std::max(max_abs, std::abs(pt.mean_delta));
        report.extras["ap_lr_max_abs_delta"] = max_abs;
    }
    if (auto it = report.dose_curves.find("AP:RF");
        it != report.dose_curves.end() && it->second.size() >= 3) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& pt : it->second) pts.emplace_back(pt.dose, pt.mean_delta);
        const auto fit = stats::fit_log_dose(pts);
        report.extras["ap_rf_slope"] = fit.slope;
        report.extras["ap_rf_intercept"] = fit.intercept;
        report.extras["ap_rf_r2"] = fit.r2;
    }

    // Compound sub-additivity.
    if (auto it = by_exp.find("J"); it != by_exp.end()) {
        std::vector<double> ratios;
        int n_defined = 0, n_subadd = 0;
        for (const auto* r : it->second) {
            if (param_num(*r, "x_ratio_defined", 0.0) != 1.0) continue;
            const double ratio = param_num(*r, "x_ratio", 0.0);
            ratios.push_back(ratio);
            ++n_defined;
            n_subadd += (ratio < 1.0);
        }
        if (!ratios.empty()) {
            report.extras["j_median_ratio"] = stats::median(ratios);
            report.extras["j_frac_subadditive"] = static_cast<double>(n_subadd) / n_defined;
            report.extras["j_n_defined"] = n_defined;
        }
    }

    // Placebo noise floor and the cross-seed winner-flip rate.
    if (auto it = by_exp.find("AE"); it != by_exp.end()) {
        std::map<std::string, std::vector<double>> abs_by_algo;
        std::map<RepKey, const RunRecord*> rf, lr;
        for (const auto* r : it->second) {
            abs_by_algo[r->algorithm].push_back(std::abs(r->delta));
            if (r->algorithm == "RF") rf[{r->dataset_id, r->rep}] = r;
            if (r->algorithm == "LR") lr[{r->dataset_id, r->rep}] = r;
        }
        for (const auto& [algo, vals] : abs_by_algo)
            report.extras["ae_median_abs_delta_" + algo] = stats::median(vals);
        int flips = 0, joined = 0;
        for (const auto& [key, r_rf] : rf) {
            auto l = lr.find(key);
            if (l == lr.end()) continue;
            ++joined;
            const bool winner_a = r_rf->auc_clean > l->second->auc_clean;
            const bool winner_b = r_rf->auc_leaky > l->second->auc_leaky;
            flips += (winner_a != winner_b);
        }
        if (joined > 0) {
            report.extras["ae_winner_flip_rate"] = static_cast<double>(flips) / joined;
            report.extras["ae_winner_flip_n"] = joined;
        }
    }

    // Boundary experiment: pure temporal effect and its sign test.
    if (auto it = by_exp.find("BD"); it != by_exp.end()) {
        std::vector<const RunRecord*> pure, random_gap;
        for (const auto* r : it->second)
            (param_str(*r, "control", "") == "size_matched" ? pure : random_gap).push_back(r);
        if (!pure.empty()) {
            const auto means = dataset_means(pure);
            std::vector<double> deltas;
            int n_pos = 0, n_nonzero = 0;
            for (const auto& [id, d] : means) {
                deltas.push_back(d);
                if (d != 0.0) {
                    ++n_nonzero;
                    n_pos += (d > 0.0);
                }
            }
            report.extras["bd_pure_temporal_mean"] = stats::mean(deltas);
            report.extras["bd_n"] = static_cast<double>(deltas.size());
            report.extras["bd_sign_p"] = stats::sign_test_p(n_pos, n_nonzero);
        }
        if (!random_gap.empty()) {
            const auto means = dataset_means(random_gap);
            std::vector<double> deltas;
            for (const auto& [id, d] : means) deltas.push_back(d);
            report.extras["bd_random_gap_mean"] = stats::mean(deltas);
        }
    }

    // Metric-selection winner flips.
    if (auto it = by_exp.find("MF"); it != by_exp.end()) {
        std::map<RepKey, std::pair<bool, bool>> flags; // saw A win, saw B win
        for (const auto* r : it->second) {
            auto& [saw_a, saw_b] = flags[{r->dataset_id, r->rep}];
            if (r->auc_clean > r->auc_leaky) saw_a = true;
            if (r->auc_clean < r->auc_leaky) saw_b = true;
        }
        int flips = 0;
        for (const auto& [key, f] : flags) flips += (f.first && f.second);
        report.extras["mf_flip_fraction"] = static_cast<double>(flips) / static_cast<double>(flags.size());
        report.extras["mf_n"] = static_cast<double>(flags.size());
    }

    if (auto it = by_exp.find("GP"); it != by_exp.end()) {
        const auto means = dataset_means(it->second);
        std::vector<double> deltas;
        for (const auto& [id, d] : means) deltas.push_back(d);
        report.extras["gp_mean_delta"] = stats::mean(deltas);
    }

    return report;
}

} // namespace leaklab::harness
