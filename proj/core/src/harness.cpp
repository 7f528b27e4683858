#include "leaklab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include <json.hpp>

#include "leaklab/folding.hpp"
#include "leaklab/rng.hpp"

namespace leaklab::harness {

using inject::ExperimentSpec;
using inject::ExpId;
using models::Algorithm;

namespace {

std::string escape_json(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string to_jsonl(const RunRecord& r) {
    std::string out = "{";
    out += "\"run_id\":\"" + escape_json(r.run_id) + "\",";
    out += "\"exp_id\":\"" + escape_json(r.exp_id) + "\",";
    out += "\"leak_class\":\"" + escape_json(r.leak_class) + "\",";
    out += "\"dataset_id\":\"" + escape_json(r.dataset_id) + "\",";
    out += "\"split\":\"" + escape_json(r.split) + "\",";
    out += "\"algorithm\":\"" + escape_json(r.algorithm) + "\",";
    out += "\"params\":{";
    bool first = true;
    for (const auto& [k, v] : r.params) { // std::map: sorted, deterministic
        if (!first) out += ",";
        first = false;
        out += "\"" + escape_json(k) + "\":\"" + escape_json(v) + "\"";
    }
    out += "},";
    out += "\"rep\":" + std::to_string(r.rep) + ",";
    out += "\"fold_plan_hash\":\"" + std::to_string(r.fold_plan_hash) + "\",";
    out += "\"auc_clean\":" + fmt_double(r.auc_clean) + ",";
    out += "\"auc_leaky\":" + fmt_double(r.auc_leaky) + ",";
    out += "\"delta\":" + fmt_double(r.delta) + ",";
    out += "\"wall_time_ms\":" + std::to_string(r.wall_time_ms);
    out += "}";
    return out;
}

std::string to_jsonl(const SkipRecord& r) {
    std::string out = "{";
    out += "\"skip_reason\":\"" + escape_json(r.reason) + "\",";
    out += "\"run_id\":\"" + escape_json(r.run_id) + "\",";
    out += "\"exp_id\":\"" + escape_json(r.exp_id) + "\",";
    out += "\"dataset_id\":\"" + escape_json(r.dataset_id) + "\",";
    out += "\"rep\":" + std::to_string(r.rep);
    out += "}";
    return out;
}

ParsedLine parse_jsonl(const std::string& line) {
    const auto j = nlohmann::json::parse(line);
    ParsedLine out;
    if (j.contains("skip_reason")) {
        SkipRecord s;
        s.reason = j.at("skip_reason").get<std::string>();
        s.run_id = j.value("run_id", "");
        s.exp_id = j.at("exp_id").get<std::string>();
        s.dataset_id = j.at("dataset_id").get<std::string>();
        s.rep = j.at("rep").get<int>();
        out.skip = std::move(s);
        return out;
    }
    RunRecord r;
    r.run_id = j.at("run_id").get<std::string>();
    r.exp_id = j.at("exp_id").get<std::string>();
    r.leak_class = j.at("leak_class").get<std::string>();
    r.dataset_id = j.at("dataset_id").get<std::string>();
    r.split = j.at("split").get<std::string>();
    r.algorithm = j.at("algorithm").get<std::string>();
    for (const auto& [k, v] : j.at("params").items()) r.params[k] = v.get<std::string>();
    r.rep = j.at("rep").get<int>();
    r.fold_plan_hash = std::stoull(j.at("fold_plan_hash").get<std::string>());
    r.auc_clean = j.at("auc_clean").get<double>();
    r.auc_leaky = j.at("auc_leaky").get<double>();
    r.delta = j.at("delta").get<double>();
    r.wall_time_ms = j.at("wall_time_ms").get<std::int64_t>();
    out.record = std::move(r);
    return out;
}

std::uint64_t task_seed(std::uint64_t base_seed, const std::string& exp_id,
                        const std::string& dataset_id, int rep) {
    return Fnv1a{}.u64(base_seed).str(exp_id).str(dataset_id).i64(rep).digest();
}

// ---- task dispatch ----

namespace {

RunRecord base_record(const ExperimentSpec& spec, const corpus::Dataset& data, int rep) {
    RunRecord r;
    r.exp_id = inject::to_string(spec.exp_id);
    r.leak_class = inject::to_string(inject::leak_class_of(spec.exp_id));
    r.dataset_id = data.id;
    r.split = corpus::to_string(corpus::assign_split(data.id));
    r.params = spec.params;
    r.rep = rep;
    return r;
}

void fill_outcome(RunRecord& r, const inject::PairedOutcome& out) {
    r.fold_plan_hash = out.fold_plan_hash;
    r.auc_clean = out.auc_clean;
    r.auc_leaky = out.auc_leaky;
    r.delta = out.delta;
}

inject::TransformKind kind_for(ExpId id, const ExperimentSpec& spec) {
    switch (id) {
        case ExpId::A: return inject::transform_from_string(spec.str("kind", "zscale"));
        case ExpId::E: return inject::TransformKind::outlier_trim;
        case ExpId::F: return inject::TransformKind::ordinal_encode;
        case ExpId::T: return inject::TransformKind::equal_width_bins;
        case ExpId::CE: return inject::TransformKind::chained;
        case ExpId::AB: return inject::TransformKind::pca;
        default: throw std::logic_error("kind_for: not a class-I experiment");
    }
}

corpus::Dataset subsample_dataset(const corpus::Dataset& data, int n_sub, std::uint64_t seed) {
    const auto idx = folding::stratified_subsample(data, n_sub, seed);
    corpus::Dataset sub;
    sub.id = data.id;
    sub.features = data.features.take_rows(idx);
    sub.labels = take(data.labels, idx);
    sub.categorical_mask = data.categorical_mask;
    if (data.time_index) sub.time_index = take(*data.time_index, idx);
    if (data.group_id) sub.group_id = take(*data.group_id, idx);
    corpus::rehash(sub);
    corpus::validate(sub);
    return sub;
}

std::vector<RunRecord> run_ao(const ExperimentSpec& spec, const corpus::Dataset& data, int rep,
                              std::uint64_t seed, const LabConfig& config) {
    const auto algo = models::algorithm_from_string(spec.str("algorithm", "LR"));
    models::ModelSpec model = config.model_default(algo);
    model.seed = derive_seed(seed, "model");
    const int cv_k = config.cv_k();
    const int m6_reps = static_cast<int>(spec.num("m6_reps", 3));
    const int boot_b = static_cast<int>(spec.num("bootstrap_b", 500));

    // Half the rows are withheld before any CV and provide the truth AUC.
    const int n = static_cast<int>(data.n());
    const auto cv_rows = folding::stratified_subsample(data, n / 2, derive_seed(seed, "holdout"));
    std::vector<bool> in_cv(data.n(), false);
    for (int i : cv_rows) in_cv[static_cast<std::size_t>(i)] = true;
    std::vector<int> truth_rows;
    for (int i = 0; i < n; ++i)
        if (!in_cv[static_cast<std::size_t>(i)]) truth_rows.push_back(i);

    const Matrix x_cv = data.features.take_rows(cv_rows);
    const auto y_cv = take(data.labels, cv_rows);
    const Matrix x_truth = data.features.take_rows(truth_rows);
    const auto y_truth = take(data.labels, truth_rows);

    const auto full_model = models::fit(model, x_cv, y_cv);
    const double truth_auc = metrics::auc(models::predict_scores(full_model, x_truth), y_truth);

    const auto plan = folding::stratified_kfold(y_cv, cv_k, derive_seed(seed, "folds"));
    const auto oof = inject::cv_oof(x_cv, y_cv, plan, model);
    if (static_cast<int>(oof.fold_aucs.size()) != cv_k)
        throw std::invalid_argument("ao: a fold lost one class; dataset too small");

    stats::CiInput input;
    input.fold_scores = oof.fold_aucs;
    input.k = cv_k;
    input.n_test = static_cast<int>(plan.folds.front().test.size());
    input.n_train = static_cast<int>(y_cv.size()) - input.n_test;
    for (int r2 = 0; r2 < m6_reps; ++r2) {
        const auto rep_plan = folding::stratified_kfold(y_cv, cv_k, derive_seed(seed, "folds_rep", static_cast<std::uint64_t>(r2)));
        const auto rep_oof = inject::cv_oof(x_cv, y_cv, rep_plan, model);
        input.rep_scores.insert(input.rep_scores.end(), rep_oof.fold_aucs.begin(), rep_oof.fold_aucs.end());
    }

    // Full k-fold CV rerun per stratified bootstrap resample of the CV half.
    auto bootstrap_rerun = [&](int b) {
        Rng rng(derive_seed(seed, "boot", static_cast<std::uint64_t>(b)));
        std::vector<int> pos, neg;
        for (std::size_t i = 0; i < y_cv.size(); ++i)
            (y_cv[i] == 1 ? pos : neg).push_back(static_cast<int>(i));
        std::vector<int> rows;
        rows.reserve(y_cv.size());
        for (std::size_t i = 0; i < pos.size(); ++i)
            rows.push_back(pos[static_cast<std::size_t>(rng.uniform_index(pos.size()))]);
        for (std::size_t i = 0; i < neg.size(); ++i)
            rows.push_back(neg[static_cast<std::size_t>(rng.uniform_index(neg.size()))]);
        const Matrix xb = x_cv.take_rows(rows);
        const auto yb = take(y_cv, rows);
        const auto bplan = folding::stratified_kfold(yb, cv_k, derive_seed(seed, "boot_folds", static_cast<std::uint64_t>(b)));
        return inject::cv_oof(xb, yb, bplan, model).pooled_auc;
    };

    std::vector<RunRecord> records;
    for (auto method : {stats::CiMethod::M1_naive_z, stats::CiMethod::M2_t,
                        stats::CiMethod::M3_nadeau_bengio, stats::CiMethod::M4_bootstrap,
                        stats::CiMethod::M5_conservative_z, stats::CiMethod::M6_corrected_resampled_t}) {
        const auto iv = method == stats::CiMethod::M4_bootstrap
                            ? stats::ci_estimate(method, input, bootstrap_rerun, boot_b)
                            : stats::ci_estimate(method, input);
        RunRecord r = base_record(spec, data, rep);
        r.algorithm = models::to_string(algo);
        r.params["method"] = stats::to_string(method);
        r.params["x_ci_lo"] = fmt_double(iv.lo);
        r.params["x_ci_hi"] = fmt_double(iv.hi);
        r.fold_plan_hash = plan.plan_hash;
        r.auc_clean = iv.center;
        r.auc_leaky = truth_auc;
        r.delta = truth_auc - iv.center;
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<RunRecord> run_an(const ExperimentSpec& spec, const corpus::Dataset& data, int rep,
                              std::uint64_t seed, const LabConfig& config) {
    const int n_sub = static_cast<int>(spec.num("n_sub", 200));
    if (n_sub > static_cast<int>(data.n()))
        throw std::invalid_argument("an: dataset smaller than subsample size");
    const auto sub = subsample_dataset(data, n_sub, derive_seed(seed, "an_subsample"));
    const std::string mech = spec.str("mech", "class1");
    const int cv_k = config.cv_k();

    RunRecord r = base_record(spec, data, rep);
    inject::PairedOutcome out;
    if (mech == "class1") {
        out = inject::class1_global_transform(sub, inject::TransformKind::zscale, {},
                                              config.model_default(Algorithm::LR), seed, cv_k);
        r.algorithm = "LR";
    } else if (mech == "peek") {
        const auto pool = config.nscaling_pool();
        out = inject::select_best_by_holdout(sub, pool, static_cast<int>(spec.num("k", pool.size())),
                                             inject::SelectionRule::peek_configs, seed, cv_k,
                                             inject::CleanBaseline::first_candidate);
        r.algorithm = "pool" + std::to_string(pool.size());
    } else if (mech == "seed") {
        out = inject::select_best_by_holdout(sub, {config.model_default(Algorithm::RF)},
                                             static_cast<int>(spec.num("K", 10)),
                                             inject::SelectionRule::best_seed, seed, cv_k);
        r.algorithm = "RF";
    } else if (mech == "oversample") {
        out = inject::oversample_before_split(sub, inject::OversampleMethod::random,
                                              spec.num("target_ratio", 0.5),
                                              static_cast<int>(spec.num("k_neighbors", 5)),
                                              config.model_default(Algorithm::KNN), seed, cv_k);
        r.algorithm = "KNN";
    } else {
        throw std::invalid_argument("an: unknown mech '" + mech + "'");
    }
    fill_outcome(r, out);
    return {std::move(r)};
}

} // namespace

std::vector<RunRecord> run_task(const ExperimentSpec& spec, const corpus::Dataset& data, int rep,
                                std::uint64_t base_seed, const LabConfig& config) {
    inject::validate(spec);
    const auto seed = task_seed(base_seed, inject::to_string(spec.exp_id), data.id, rep);
    const int cv_k = config.cv_k();

    auto single = [&](const inject::PairedOutcome& out, const std::string& algorithm) {
        RunRecord r = base_record(spec, data, rep);
        r.algorithm = algorithm;
        fill_outcome(r, out);
        return std::vector<RunRecord>{std::move(r)};
    };

    switch (spec.exp_id) {
        case ExpId::A:
        case ExpId::F:
        case ExpId::T:
        case ExpId::CE:
        case ExpId::AB:
        case ExpId::E: {
            const auto algo = models::algorithm_from_string(spec.str("algorithm", "LR"));
            inject::TransformParams params;
            params.trim = spec.num("trim", 0.1);
            params.bins = static_cast<int>(spec.num("bins", 5));
            params.components = static_cast<int>(spec.num("components", 0));
            const auto out = inject::class1_global_transform(data, kind_for(spec.exp_id, spec), params,
                                                             config.model_default(algo), seed, cv_k);
            return single(out, models::to_string(algo));
        }
        case ExpId::B: {
            const auto pool = config.peeking_pool();
            const auto out = inject::select_best_by_holdout(
                data, pool, static_cast<int>(spec.num("k", 10)), inject::SelectionRule::peek_configs,
                seed, cv_k);
            return single(out, "pool" + std::to_string(pool.size()));
        }
        case ExpId::AQ: {
            const auto pool = config.screen_pool();
            const auto out = inject::select_best_by_holdout(
                data, pool, static_cast<int>(spec.num("k", 3)), inject::SelectionRule::screen_algorithms,
                seed, cv_k);
            return single(out, "screen" + std::to_string(pool.size()));
        }
        case ExpId::AI:
        case ExpId::AP: {
            const auto algo = models::algorithm_from_string(spec.str("algorithm", "RF"));
            const int K = static_cast<int>(spec.num("K", 10));
            const auto out = inject::select_best_by_holdout(data, {config.model_default(algo)}, K,
                                                            inject::SelectionRule::best_seed, seed, cv_k);
            return single(out, models::to_string(algo));
        }
        case ExpId::BB: {
            const auto out = inject::early_stopped_fit(data, config.sgd_options(),
                                                       static_cast<int>(spec.num("patience", 5)), seed, cv_k);
            return single(out, "LR_sgd");
        }
        case ExpId::AC: {
            const auto algo = models::algorithm_from_string(spec.str("algorithm", "LR"));
            const auto out = inject::target_encode_experiment(data, spec.num("m", 10.0),
                                                              config.model_default(algo), seed, cv_k);
            return single(out, models::to_string(algo));
        }
        case ExpId::FS: {
            const auto algo = models::algorithm_from_string(spec.str("algorithm", "LR"));
            int top_m = static_cast<int>(spec.num("top_m", 0));
            if (top_m <= 0) top_m = std::max(1, static_cast<int>(data.p()) / 2);
            const auto out = inject::feature_select_experiment(data, top_m, config.model_default(algo),
                                                               seed, cv_k);
            return single(out, models::to_string(algo));
        }
        case ExpId::H: {
            const auto algo = models::algorithm_from_string(spec.str("algorithm", "RF"));
            const auto out = inject::inject_duplicates(data, spec.num("rate", 0.1),
                                                       config.model_default(algo), seed, cv_k);
            return single(out, models::to_string(algo));
        }
        case ExpId::G:
        case ExpId::BA: {
            const auto method = spec.str("method", spec.exp_id == ExpId::BA ? "smote" : "random") == "smote"
                                    ? inject::OversampleMethod::smote
                                    : inject::OversampleMethod::random;
            const auto algo = models::algorithm_from_string(spec.str("algorithm", "KNN"));
            const auto out = inject::oversample_before_split(
                data, method, spec.num("target_ratio", 0.5),
                static_cast<int>(spec.num("k_neighbors", 5)), config.model_default(algo), seed, cv_k);
            return single(out, models::to_string(algo));
        }
        case ExpId::J: {
            const auto out = inject::compound_stack(data, config.peeking_pool(), seed, cv_k);
            auto records = single(out, "pool19");
            for (const auto& [key, value] : out.extras)
                records.front().params["x_" + key] = fmt_double(value);
            return records;
        }
        case ExpId::AK: {
            const auto mode = spec.str("mode", "oof") == "in_fold" ? inject::StackMode::in_fold
                                                                   : inject::StackMode::oof;
            auto dt = config.model_default(Algorithm::DT);
            dt.hyperparameters["max_depth"] = spec.num("base_dt_depth", 4);
            const std::vector<models::ModelSpec> bases = {config.model_default(Algorithm::LR), dt};
            const auto out = inject::oof_stacking(data, bases, config.model_default(Algorithm::LR),
                                                  mode, seed, cv_k);
            return single(out, "stack_LR_DT");
        }
        case ExpId::AE: {
            const auto algo = models::algorithm_from_string(spec.str("algorithm", "RF"));
            const auto out = inject::placebo(data, config.model_default(algo),
                                             derive_seed(seed, "a"), derive_seed(seed, "b"), seed, cv_k);
            return single(out, models::to_string(algo));
        }
        case ExpId::AN:
            return run_an(spec, data, rep, seed, config);
        case ExpId::AO:
            return run_ao(spec, data, rep, seed, config);
        case ExpId::BD: {
            const auto algo = models::algorithm_from_string(
                spec.str("algorithm", config.str("boundary.algorithm", "KNN")));
            const auto res = inject::boundary_comparison(data, config.model_default(algo),
                                                         static_cast<int>(spec.num("walk_k", 4)), seed, cv_k);
            RunRecord r = base_record(spec, data, rep);
            r.algorithm = models::to_string(algo);
            r.fold_plan_hash = res.walk_plan_hash;
            r.auc_clean = res.auc_walk;
            const bool size_matched = spec.str("control", "size_matched") == "size_matched";
            r.auc_leaky = size_matched ? res.auc_size_matched : res.auc_random;
            r.delta = r.auc_leaky - r.auc_clean;
            r.params["control"] = size_matched ? "size_matched" : "random";
            return {std::move(r)};
        }
        case ExpId::GP: {
            const auto algo = models::algorithm_from_string(spec.str("algorithm", "KNN"));
            const auto out = inject::group_folding_experiment(data, config.model_default(algo), seed, cv_k);
            return single(out, models::to_string(algo));
        }
        case ExpId::MF: {
            const auto res = inject::metric_flip_experiment(data, config.model_default(Algorithm::LR),
                                                            config.model_default(Algorithm::RF), seed, cv_k);
            std::vector<RunRecord> records;
            for (std::size_t i = 0; i < res.metrics_a.size(); ++i) {
                RunRecord r = base_record(spec, data, rep);
                r.algorithm = "LR_vs_RF";
                r.params["metric"] = metrics::to_string(res.metrics_a[i].metric);
                r.fold_plan_hash = res.fold_plan_hash;
                r.auc_clean = res.metrics_a[i].value;
                r.auc_leaky = res.metrics_b[i].value;
                r.delta = r.auc_leaky - r.auc_clean;
                records.push_back(std::move(r));
            }
            return records;
        }
    }
    throw std::logic_error("run_task: unhandled experiment");
}

SuiteSummary run_suite(const std::vector<corpus::Dataset>& datasets,
                       const std::vector<ExperimentSpec>& specs, const LabConfig& config,
                       const SuiteOptions& opts, const std::string& out_path) {
    if (datasets.empty()) throw std::invalid_argument("run_suite: empty corpus");
    if (specs.empty()) throw std::invalid_argument("run_suite: no experiments");

    Fnv1a run_hash;
    run_hash.u64(opts.base_seed);
    for (const auto& spec : specs) {
        run_hash.str(inject::to_string(spec.exp_id)).i64(spec.reps);
        for (const auto& [k, v] : spec.params) run_hash.str(k).str(v);
    }
    char run_id_buf[32];
    std::snprintf(run_id_buf, sizeof run_id_buf, "%016llx",
                  static_cast<unsigned long long>(run_hash.digest()));
    const std::string run_id = run_id_buf;

    struct Task {
        int spec_idx;
        int dataset_idx;
        int rep;
    };
    std::vector<Task> tasks;
    for (int s = 0; s < static_cast<int>(specs.size()); ++s)
        for (int d = 0; d < static_cast<int>(datasets.size()); ++d)
            for (int r = 0; r < specs[static_cast<std::size_t>(s)].reps; ++r)
                tasks.push_back({s, d, r});

    struct Slot {
        std::vector<RunRecord> records;
        std::optional<SkipRecord> skip;
    };
    std::vector<Slot> slots(tasks.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) return;
            const auto& task = tasks[t];
            const auto& spec = specs[static_cast<std::size_t>(task.spec_idx)];
            const auto& data = datasets[static_cast<std::size_t>(task.dataset_idx)];
            const auto start = std::chrono::steady_clock::now();
            try {
                auto records = run_task(spec, data, task.rep, opts.base_seed, config);
                const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                         std::chrono::steady_clock::now() - start)
                                         .count();
                for (auto& r : records) {
                    r.run_id = run_id;
                    r.wall_time_ms = opts.record_timing ? elapsed : 0;
                }
                slots[t].records = std::move(records);
            } catch (const std::exception& e) {
                SkipRecord skip;
                skip.run_id = run_id;
                skip.exp_id = inject::to_string(spec.exp_id);
                skip.dataset_id = data.id;
                skip.rep = task.rep;
                skip.reason = e.what();
                slots[t].skip = std::move(skip);
            }
        }
    };

    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(jobs));
        for (int i = 0; i < jobs; ++i) threads.emplace_back(worker);
        for (auto& th : threads) th.join();
    }

    // Canonical order regardless of scheduling: (exp_id, dataset_id, rep,
    // spec position) for records, same for skips, skips after records.
    struct Keyed {
        std::string exp_id;
        std::string dataset_id;
        int rep;
        int spec_idx;
        std::string line;
        bool operator<(const Keyed& o) const {
            return std::tie(exp_id, dataset_id, rep, spec_idx, line) <
                   std::tie(o.exp_id, o.dataset_id, o.rep, o.spec_idx, o.line);
        }
    };
    std::vector<Keyed> record_lines, skip_lines;
    for (std::size_t t = 0; t < slots.size(); ++t) {
        const auto& task = tasks[t];
        for (const auto& r : slots[t].records)
            record_lines.push_back({r.exp_id, r.dataset_id, r.rep, task.spec_idx, to_jsonl(r)});
        if (slots[t].skip)
            skip_lines.push_back({slots[t].skip->exp_id, slots[t].skip->dataset_id,
                                  slots[t].skip->rep, task.spec_idx, to_jsonl(*slots[t].skip)});
    }
    std::sort(record_lines.begin(), record_lines.end());
    std::sort(skip_lines.begin(), skip_lines.end());

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("run_suite: cannot open " + out_path + " for writing");
    for (const auto& l : record_lines) out << l.line << "\n";
    for (const auto& l : skip_lines) out << l.line << "\n";

    SuiteSummary summary;
    summary.n_records = static_cast<int>(record_lines.size());
    summary.n_skips = static_cast<int>(skip_lines.size());
    summary.n_datasets = static_cast<int>(datasets.size());
    summary.out_path = out_path;
    return summary;
}

std::vector<ExperimentSpec> default_catalogue(const std::vector<std::string>& ids,
                                              const LabConfig& config) {
    std::vector<std::string> wanted = ids;
    const bool all = wanted.empty() || (wanted.size() == 1 && wanted.front() == "all");
    auto want = [&](const std::string& id) {
        return all || std::find(wanted.begin(), wanted.end(), id) != wanted.end();
    };
    const int reps = config.default_reps();

    std::vector<ExperimentSpec> specs;
    auto add = [&](ExpId id, std::map<std::string, std::string> params) {
        if (!want(inject::to_string(id))) return;
        ExperimentSpec spec;
        spec.exp_id = id;
        spec.params = std::move(params);
        spec.reps = reps;
        specs.push_back(std::move(spec));
    };

    add(ExpId::A, {{"kind", "zscale"}});
    add(ExpId::E, {{"trim", "0.1"}});
    add(ExpId::F, {});
    add(ExpId::T, {{"bins", "5"}});
    add(ExpId::CE, {});
    add(ExpId::AB, {});
    for (const char* k : {"1", "2", "5", "10"}) add(ExpId::B, {{"k", k}});
    add(ExpId::AI, {{"K", "10"}});
    for (const char* k : {"5", "10", "25", "50", "100"}) {
        add(ExpId::AP, {{"K", k}, {"algorithm", "RF"}});
        add(ExpId::AP, {{"K", k}, {"algorithm", "LR"}});
    }
    add(ExpId::AQ, {{"k", "3"}});
    add(ExpId::BB, {{"patience", "5"}});
    add(ExpId::AC, {{"m", "10"}});
    add(ExpId::FS, {});
    for (const char* algo : {"GNB", "LR", "RF", "KNN", "DT"})
        add(ExpId::H, {{"rate", "0.1"}, {"algorithm", algo}});
    add(ExpId::G, {{"method", "random"}});
    add(ExpId::BA, {{"method", "smote"}});
    add(ExpId::J, {});
    add(ExpId::AK, {{"mode", "oof"}});
    add(ExpId::AK, {{"mode", "in_fold"}});
    add(ExpId::AE, {{"algorithm", "RF"}});
    add(ExpId::AE, {{"algorithm", "LR"}});
    for (const char* mech : {"class1", "peek", "seed", "oversample"})
        for (const char* n : {"50", "100", "200", "500", "1000", "2000", "5000", "10000"})
            add(ExpId::AN, {{"mech", mech}, {"n_sub", n}});
    add(ExpId::AO, {{"algorithm", "LR"}});
    add(ExpId::BD, {{"control", "size_matched"}});
    add(ExpId::BD, {{"control", "random"}});
    add(ExpId::GP, {});
    add(ExpId::MF, {});
    return specs;
}

} // namespace leaklab::harness
