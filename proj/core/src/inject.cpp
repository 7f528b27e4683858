#include "leaklab/inject.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "leaklab/rng.hpp"
#include "leaklab/stats.hpp"

namespace leaklab::inject {

using corpus::Dataset;
using folding::FoldPlan;
using models::ModelSpec;

std::string to_string(ExpId id) {
    switch (id) {
        case ExpId::A: return "A";
        case ExpId::E: return "E";
        case ExpId::F: return "F";
        case ExpId::T: return "T";
        case ExpId::CE: return "CE";
        case ExpId::AB: return "AB";
        case ExpId::B: return "B";
        case ExpId::AI: return "AI";
        case ExpId::AP: return "AP";
        case ExpId::AQ: return "AQ";
        case ExpId::BB: return "BB";
        case ExpId::AC: return "AC";
        case ExpId::FS: return "FS";
        case ExpId::G: return "G";
        case ExpId::H: return "H";
        case ExpId::BA: return "BA";
        case ExpId::J: return "J";
        case ExpId::AK: return "AK";
        case ExpId::AE: return "AE";
        case ExpId::AN: return "AN";
        case ExpId::AO: return "AO";
        case ExpId::BD: return "BD";
        case ExpId::GP: return "GP";
        case ExpId::MF: return "MF";
    }
    return "?";
}

ExpId exp_from_string(const std::string& s) {
    static const std::map<std::string, ExpId> lut = {
        {"A", ExpId::A},   {"E", ExpId::E},   {"F", ExpId::F},   {"T", ExpId::T},
        {"CE", ExpId::CE}, {"AB", ExpId::AB}, {"B", ExpId::B},   {"AI", ExpId::AI},
        {"AP", ExpId::AP}, {"AQ", ExpId::AQ}, {"BB", ExpId::BB}, {"AC", ExpId::AC},
        {"FS", ExpId::FS}, {"G", ExpId::G},   {"H", ExpId::H},   {"BA", ExpId::BA},
        {"J", ExpId::J},   {"AK", ExpId::AK}, {"AE", ExpId::AE}, {"AN", ExpId::AN},
        {"AO", ExpId::AO}, {"BD", ExpId::BD}, {"GP", ExpId::GP}, {"MF", ExpId::MF},
    };
    auto it = lut.find(s);
    if (it == lut.end()) throw std::invalid_argument("unknown experiment id: " + s);
    return it->second;
}

LeakClass leak_class_of(ExpId id) {
    switch (id) {
        case ExpId::A:
        case ExpId::E:
        case ExpId::F:
        case ExpId::T:
        case ExpId::CE:
        case ExpId::AB:
            return LeakClass::I;
        case ExpId::B:
        case ExpId::AI:
        case ExpId::AP:
        case ExpId::AQ:
        case ExpId::BB:
        case ExpId::AC:
        case ExpId::FS:
            return LeakClass::II;
        case ExpId::G:
        case ExpId::H:
        case ExpId::BA:
            return LeakClass::III;
        case ExpId::BD:
        case ExpId::GP:
            return LeakClass::IV;
        case ExpId::AE:
            return LeakClass::null_control;
        case ExpId::J:
        case ExpId::AK:
        case ExpId::AN:
        case ExpId::AO:
        case ExpId::MF:
            return LeakClass::diagnostic;
    }
    return LeakClass::diagnostic;
}

std::string to_string(LeakClass c) {
    switch (c) {
        case LeakClass::I: return "I";
        case LeakClass::II: return "II";
        case LeakClass::III: return "III";
        case LeakClass::IV: return "IV";
        case LeakClass::null_control: return "null_control";
        case LeakClass::diagnostic: return "diagnostic";
    }
    return "?";
}

double ExperimentSpec::num(const std::string& key, double fallback) const {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    return std::stod(it->second);
}

std::string ExperimentSpec::str(const std::string& key, const std::string& fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

void validate(const ExperimentSpec& spec) {
    if (spec.reps < 1) throw std::invalid_argument("experiment spec: reps must be >= 1");
    const double rate = spec.num("rate", 0.0);
    if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("experiment spec: rate must be in [0, 1]");
    if (spec.num("k", 1.0) < 1.0) throw std::invalid_argument("experiment spec: k must be >= 1");
    if (spec.num("K", 1.0) < 1.0) throw std::invalid_argument("experiment spec: K must be >= 1");
}

// ---- shared plumbing ----

namespace {

struct Pooled {
    std::vector<double> scores;
    std::vector<int> labels;
    std::vector<double> fold_aucs;

    void add(const std::vector<double>& s, std::span<const int> y) {
        scores.insert(scores.end(), s.begin(), s.end());
        labels.insert(labels.end(), y.begin(), y.end());
        bool has0 = false, has1 = false;
        for (int v : y) (v == 1 ? has1 : has0) = true;
        if (has0 && has1) fold_aucs.push_back(metrics::auc(s, y));
    }

    double auc() const { return metrics::auc(scores, labels); }
};

std::vector<double> score_fold(const Matrix& Xtr, std::span<const int> ytr, const Matrix& Xte,
                               const ModelSpec& spec) {
    return models::predict_scores(models::fit(spec, Xtr, ytr), Xte);
}

FoldPlan shared_plan(const Dataset& data, std::uint64_t task_seed, int cv_k) {
    return folding::stratified_kfold(data.labels, cv_k, derive_seed(task_seed, "folds"));
}

WorkflowArm make_arm(WorkflowArm::Kind kind, std::string pipeline, std::uint64_t hash,
                     std::uint64_t seed) {
    WorkflowArm arm;
    arm.arm = kind;
    arm.pipeline = std::move(pipeline);
    arm.fold_plan_hash = hash;
    arm.base_seed = seed;
    return arm;
}

PairedOutcome finish(double auc_clean, double auc_leaky, std::uint64_t hash, std::uint64_t seed,
                     const std::string& clean_desc, const std::string& leaky_desc) {
    PairedOutcome out;
    out.auc_clean = auc_clean;
    out.auc_leaky = auc_leaky;
    out.delta = auc_leaky - auc_clean;
    out.fold_plan_hash = hash;
    out.clean_arm = make_arm(WorkflowArm::Kind::clean, clean_desc, hash, seed);
    out.leaky_arm = make_arm(WorkflowArm::Kind::leaky, leaky_desc, hash, seed);
    return out;
}

} // namespace

OofResult cv_oof(const Matrix& X, std::span<const int> y, const FoldPlan& plan,
                 const ModelSpec& spec) {
    Pooled pooled;
    for (const auto& fold : plan.folds) {
        const Matrix Xtr = X.take_rows(fold.train);
        const Matrix Xte = X.take_rows(fold.test);
        const auto ytr = take(y, fold.train);
        const auto yte = take(y, fold.test);
        pooled.add(score_fold(Xtr, ytr, Xte, spec), yte);
    }
    OofResult out;
    out.pooled_auc = pooled.auc();
    out.scores = std::move(pooled.scores);
    out.labels = std::move(pooled.labels);
    out.fold_aucs = std::move(pooled.fold_aucs);
    return out;
}

int select_argmax(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("select_argmax: empty input");
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i)
        if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;
    return best;
}

// ---- Class I ----

PairedOutcome class1_global_transform(const Dataset& data, TransformKind kind,
                                      const TransformParams& params, const ModelSpec& model,
                                      std::uint64_t task_seed, int cv_k) {
    const auto plan = shared_plan(data, task_seed, cv_k);
    ModelSpec spec = model;
    spec.seed = derive_seed(task_seed, "model");
    const auto all_rows = identity_indices(data.n());

    auto run_arm = [&](bool global) {
        Pooled pooled;
        if (kind == TransformKind::outlier_trim) {
            for (const auto& fold : plan.folds) {
                const auto kept = trim_kept_rows(data.features, global ? std::span<const int>(all_rows) : std::span<const int>(fold.train),
                                                 fold.train, params.trim);
                pooled.add(score_fold(data.features.take_rows(kept), take(data.labels, kept),
                                      data.features.take_rows(fold.test), spec),
                           take(data.labels, fold.test));
            }
            return pooled;
        }
        std::unique_ptr<FittedTransform> global_t;
        if (global) global_t = fit_transform(kind, data.features, all_rows, data.categorical_mask, params);
        for (const auto& fold : plan.folds) {
            const auto& t = global ? global_t
                                   : (global_t = fit_transform(kind, data.features, fold.train,
                                                               data.categorical_mask, params));
            // applying to the full matrix keeps the code path identical in both arms
            const Matrix Xt = t->apply(data.features);
            pooled.add(score_fold(Xt.take_rows(fold.train), take(data.labels, fold.train),
                                  Xt.take_rows(fold.test), spec),
                       take(data.labels, fold.test));
            if (!global) global_t.reset();
        }
        return pooled;
    };

    const Pooled clean = run_arm(false);
    const Pooled leaky = run_arm(true);
    return finish(clean.auc(), leaky.auc(), plan.plan_hash, task_seed,
                  to_string(kind) + "(fold)+" + models::to_string(spec.algorithm),
                  to_string(kind) + "(global)+" + models::to_string(spec.algorithm));
}

// ---- Class II: selection ----

PairedOutcome select_best_by_holdout(const Dataset& data, const std::vector<ModelSpec>& pool,
                                     int k_evaluated, SelectionRule rule,
                                     std::uint64_t task_seed, int cv_k, CleanBaseline baseline) {
    if (pool.empty()) throw std::invalid_argument("select_best_by_holdout: empty pool");
    if (k_evaluated < 1) throw std::invalid_argument("select_best_by_holdout: k must be >= 1");
    const auto plan = shared_plan(data, task_seed, cv_k);

    if (rule == SelectionRule::best_seed) {
        // K reseeded CV runs of one spec: best vs mean of the pooled AUCs.
        std::vector<double> aucs;
        aucs.reserve(static_cast<std::size_t>(k_evaluated));
        for (int i = 0; i < k_evaluated; ++i) {
            ModelSpec spec = pool.front();
            spec.seed = derive_seed(task_seed, "seedrun", static_cast<std::uint64_t>(i));
            aucs.push_back(cv_oof(data.features, data.labels, plan, spec).pooled_auc);
        }
        const double best = *std::max_element(aucs.begin(), aucs.end());
        const double lo = *std::min_element(aucs.begin(), aucs.end());
        // mean of identical runs is exactly the run value
        const double clean = (best == lo) ? best : stats::mean(aucs);
        auto out = finish(clean, best, plan.plan_hash, task_seed,
                          "mean_over_seeds(K=" + std::to_string(k_evaluated) + ")",
                          "best_of_seeds(K=" + std::to_string(k_evaluated) + ")");
        out.extras["k"] = k_evaluated;
        return out;
    }

    if (k_evaluated > static_cast<int>(pool.size()))
        throw std::invalid_argument("select_best_by_holdout: k exceeds pool size");

    std::vector<ModelSpec> candidates = pool;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        candidates[i].seed = derive_seed(task_seed, "cand", i);

    // Leaky: per fold, train a random k-subset and keep the test-fold winner's
    // scores. The winner is chosen on the same rows it is then scored on.
    Pooled leaky;
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const auto& fold = plan.folds[f];
        Rng rng(derive_seed(task_seed, "peek", f));
        auto idx = identity_indices(candidates.size());
        for (int i = 0; i < k_evaluated; ++i) {
            const auto j = static_cast<std::size_t>(i) +
                           static_cast<std::size_t>(rng.uniform_index(idx.size() - static_cast<std::size_t>(i)));
            std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
        }
        std::vector<int> sampled(idx.begin(), idx.begin() + k_evaluated);
        std::sort(sampled.begin(), sampled.end()); // ties go to the lowest pool index

        const Matrix Xtr = data.features.take_rows(fold.train);
        const Matrix Xte = data.features.take_rows(fold.test);
        const auto ytr = take(data.labels, fold.train);
        const auto yte = take(data.labels, fold.test);
        std::vector<std::vector<double>> cand_scores;
        std::vector<double> cand_aucs;
        for (int c : sampled) {
            cand_scores.push_back(score_fold(Xtr, ytr, Xte, candidates[static_cast<std::size_t>(c)]));
            cand_aucs.push_back(metrics::auc(cand_scores.back(), yte));
        }
        leaky.add(cand_scores[static_cast<std::size_t>(select_argmax(cand_aucs))], yte);
    }

    // Clean: one pool member evaluated honestly.
    std::size_t pick = 0;
    if (baseline == CleanBaseline::random_pick) {
        Rng pick_rng(derive_seed(task_seed, "clean_pick"));
        pick = static_cast<std::size_t>(pick_rng.uniform_index(candidates.size()));
    }
    const double clean_auc = cv_oof(data.features, data.labels, plan, candidates[pick]).pooled_auc;

    const char* name = rule == SelectionRule::peek_configs ? "peek" : "screen";
    auto out = finish(clean_auc, leaky.auc(), plan.plan_hash, task_seed,
                      std::string("random_pick+cv"),
                      std::string(name) + "_best_of_" + std::to_string(k_evaluated));
    out.extras["k"] = k_evaluated;
    out.extras["clean_pick"] = static_cast<double>(pick);
    return out;
}

int stop_epoch(std::span<const double> losses, int patience) {
    if (losses.empty()) throw std::invalid_argument("stop_epoch: empty loss trace");
    if (patience < 1) throw std::invalid_argument("stop_epoch: patience must be >= 1");
    int best = 0;
    int since_improvement = 0;
    for (int e = 1; e < static_cast<int>(losses.size()); ++e) {
        if (losses[static_cast<std::size_t>(e)] < losses[static_cast<std::size_t>(best)]) {
            best = e;
            since_improvement = 0;
        } else if (++since_improvement >= patience) {
            return best;
        }
    }
    return static_cast<int>(losses.size()) - 1; // never triggered: train fully
}

PairedOutcome early_stopped_fit(const Dataset& data, const models::SgdOptions& sgd,
                                int patience, std::uint64_t task_seed, int cv_k) {
    const auto plan = shared_plan(data, task_seed, cv_k);
    Pooled clean, leaky;
    double epochs_clean = 0, epochs_leaky = 0;
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const auto& fold = plan.folds[f];
        const Matrix Xtr = data.features.take_rows(fold.train);
        const Matrix Xte = data.features.take_rows(fold.test);
        const auto ytr = take(data.labels, fold.train);
        const auto yte = take(data.labels, fold.test);

        // 80/20 stratified carve-out of the training fold for the clean stop
        std::vector<int> pos, neg;
        for (std::size_t i = 0; i < ytr.size(); ++i) (ytr[i] == 1 ? pos : neg).push_back(static_cast<int>(i));
        Rng inner_rng(derive_seed(task_seed, "inner", f));
        inner_rng.shuffle(pos);
        inner_rng.shuffle(neg);
        const auto val_pos = std::max<std::size_t>(1, pos.size() / 5);
        const auto val_neg = std::max<std::size_t>(1, neg.size() / 5);
        if (pos.size() <= val_pos || neg.size() <= val_neg)
            throw std::invalid_argument("early_stopped_fit: training fold too small for an inner split");
        std::vector<int> val(pos.begin(), pos.begin() + static_cast<std::ptrdiff_t>(val_pos));
        val.insert(val.end(), neg.begin(), neg.begin() + static_cast<std::ptrdiff_t>(val_neg));
        std::vector<int> inner(pos.begin() + static_cast<std::ptrdiff_t>(val_pos), pos.end());
        inner.insert(inner.end(), neg.begin() + static_cast<std::ptrdiff_t>(val_neg), neg.end());
        std::sort(val.begin(), val.end());
        std::sort(inner.begin(), inner.end());

        models::SgdOptions full_opts = sgd;
        full_opts.seed = derive_seed(task_seed, "sgd", f);
        const auto full_path = models::sgd_logreg_path(Xtr, ytr, full_opts);

        models::SgdOptions inner_opts = sgd;
        inner_opts.seed = derive_seed(task_seed, "sgd_inner", f);
        const Matrix Xin = Xtr.take_rows(inner);
        const Matrix Xval = Xtr.take_rows(val);
        const auto yin = take(ytr, inner);
        const auto yval = take(ytr, val);
        const auto inner_path = models::sgd_logreg_path(Xin, yin, inner_opts);

        std::vector<double> val_losses, test_losses;
        val_losses.reserve(inner_path.size());
        test_losses.reserve(full_path.size());
        for (const auto& params : inner_path) val_losses.push_back(models::log_loss(params, Xval, yval));
        for (const auto& params : full_path) test_losses.push_back(models::log_loss(params, Xte, yte));

        const int e_clean = stop_epoch(val_losses, patience);
        const int e_leaky = stop_epoch(test_losses, patience);
        epochs_clean += e_clean;
        epochs_leaky += e_leaky;
        clean.add(models::linear_scores(full_path[static_cast<std::size_t>(e_clean)], Xte), yte);
        leaky.add(models::linear_scores(full_path[static_cast<std::size_t>(e_leaky)], Xte), yte);
    }
    auto out = finish(clean.auc(), leaky.auc(), plan.plan_hash, task_seed,
                      "sgd_lr+inner_split_stop", "sgd_lr+test_fold_stop");
    out.extras["mean_stop_epoch_clean"] = epochs_clean / static_cast<double>(plan.folds.size());
    out.extras["mean_stop_epoch_leaky"] = epochs_leaky / static_cast<double>(plan.folds.size());
    return out;
}

PairedOutcome target_encode_experiment(const Dataset& data, double smoothing,
                                       const ModelSpec& model, std::uint64_t task_seed, int cv_k) {
    const auto cat_cols = data.categorical_columns();
    if (cat_cols.empty())
        throw std::invalid_argument("target_encode_experiment: dataset has no categorical columns");
    const auto plan = shared_plan(data, task_seed, cv_k);
    ModelSpec spec = model;
    spec.seed = derive_seed(task_seed, "model");
    const auto all_rows = identity_indices(data.n());
    const std::size_t n = data.n(), p = data.p();

    auto encode_with = [&](std::span<const int> fit_rows) {
        Matrix Xt = data.features;
        for (int j : cat_cols) {
            std::vector<double> col(n);
            for (std::size_t i = 0; i < n; ++i) col[i] = data.features(i, static_cast<std::size_t>(j));
            const auto encoded = target_encode_column(col, data.labels, fit_rows, smoothing);
            for (std::size_t i = 0; i < n; ++i) Xt(i, static_cast<std::size_t>(j)) = encoded[i];
        }
        return Xt;
    };

    const Matrix leaky_X = encode_with(all_rows);
    Pooled clean, leaky;
    for (const auto& fold : plan.folds) {
        const auto yte = take(data.labels, fold.test);
        const Matrix clean_X = encode_with(fold.train);
        clean.add(score_fold(clean_X.take_rows(fold.train), take(data.labels, fold.train),
                             clean_X.take_rows(fold.test), spec),
                  yte);
        leaky.add(score_fold(leaky_X.take_rows(fold.train), take(data.labels, fold.train),
                             leaky_X.take_rows(fold.test), spec),
                  yte);
    }
    (void)p;
    return finish(clean.auc(), leaky.auc(), plan.plan_hash, task_seed,
                  "target_encode(fold)+" + models::to_string(spec.algorithm),
                  "target_encode(full)+" + models::to_string(spec.algorithm));
}

PairedOutcome feature_select_experiment(const Dataset& data, int top_m, const ModelSpec& model,
                                        std::uint64_t task_seed, int cv_k) {
    const auto plan = shared_plan(data, task_seed, cv_k);
    ModelSpec spec = model;
    spec.seed = derive_seed(task_seed, "model");
    const auto all_rows = identity_indices(data.n());
    const auto global_sel = select_top_features(data.features, data.labels, all_rows, top_m);
    const Matrix leaky_X = data.features.take_cols(global_sel);

    Pooled clean, leaky;
    for (const auto& fold : plan.folds) {
        const auto yte = take(data.labels, fold.test);
        const auto ytr = take(data.labels, fold.train);
        const auto fold_sel = select_top_features(data.features, data.labels, fold.train, top_m);
        const Matrix clean_X = data.features.take_cols(fold_sel);
        clean.add(score_fold(clean_X.take_rows(fold.train), ytr, clean_X.take_rows(fold.test), spec), yte);
        leaky.add(score_fold(leaky_X.take_rows(fold.train), ytr, leaky_X.take_rows(fold.test), spec), yte);
    }
    return finish(clean.auc(), leaky.auc(), plan.plan_hash, task_seed,
                  "feature_select(fold)+" + models::to_string(spec.algorithm),
                  "feature_select(full)+" + models::to_string(spec.algorithm));
}

// ---- Class III: memorization ----

PairedOutcome inject_duplicates(const Dataset& data, double rate, const ModelSpec& model,
                                std::uint64_t task_seed, int cv_k) {
    if (rate < 0.0 || rate > 0.5) throw std::invalid_argument("inject_duplicates: rate must be in [0, 0.5]");
    const auto plan = shared_plan(data, task_seed, cv_k);
    ModelSpec spec = model;
    spec.seed = derive_seed(task_seed, "model");

    Pooled clean, leaky;
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const auto& fold = plan.folds[f];
        const auto yte = take(data.labels, fold.test);
        const Matrix Xte = data.features.take_rows(fold.test);

        clean.add(score_fold(data.features.take_rows(fold.train), take(data.labels, fold.train), Xte, spec), yte);

        const auto n_copy = static_cast<std::size_t>(rate * static_cast<double>(fold.test.size()));
        std::vector<int> train_aug = fold.train;
        if (n_copy > 0) {
            Rng rng(derive_seed(task_seed, "dup", f));
            auto shuffled = fold.test;
            rng.shuffle(shuffled);
            train_aug.insert(train_aug.end(), shuffled.begin(),
                             shuffled.begin() + static_cast<std::ptrdiff_t>(n_copy));
        }
        leaky.add(score_fold(data.features.take_rows(train_aug), take(data.labels, train_aug), Xte, spec), yte);
    }
    return finish(clean.auc(), leaky.auc(), plan.plan_hash, task_seed,
                  models::to_string(spec.algorithm) + "+clean_folds",
                  models::to_string(spec.algorithm) + "+dup" + std::to_string(rate));
}

namespace {

struct Oversampler {
    OversampleMethod method;
    double target_ratio;
    int k_neighbors;

    // Appends synthetic/duplicated minority rows drawn from source_rows until
    // the minority fraction of (current_rows + added) reaches target_ratio.
    // Returns the feature rows and labels of the additions.
    std::pair<Matrix, std::vector<int>> augment(const Matrix& X, std::span<const int> labels,
                                                std::span<const int> scope_rows, int minority_label,
                                                Rng& rng) const {
        std::vector<int> minority;
        for (int r : scope_rows)
            if (labels[static_cast<std::size_t>(r)] == minority_label) minority.push_back(r);
        const auto n = static_cast<double>(scope_rows.size());
        const auto n_min = static_cast<double>(minority.size());
        const auto add = static_cast<std::size_t>(
            std::max(0.0, std::ceil((target_ratio * n - n_min) / (1.0 - target_ratio))));
        Matrix rows(add, X.cols());
        std::vector<int> out_labels(add, minority_label);
        if (add == 0) return {rows, out_labels};

        const int k_eff = std::min<int>(k_neighbors, static_cast<int>(minority.size()) - 1);
        if (method == OversampleMethod::smote && k_eff < 1)
            throw std::invalid_argument("oversample: too few minority rows for SMOTE neighbors");

        for (std::size_t s = 0; s < add; ++s) {
            const auto base_idx = minority[static_cast<std::size_t>(rng.uniform_index(minority.size()))];
            auto base = X.row(static_cast<std::size_t>(base_idx));
            if (method == OversampleMethod::random) {
                for (std::size_t j = 0; j < X.cols(); ++j) rows(s, j) = base[j];
                continue;
            }
            // k nearest minority neighbors of the base row, excluding itself
            std::vector<std::pair<double, int>> dist;
            dist.reserve(minority.size());
            for (int m : minority) {
                if (m == base_idx) continue;
                auto other = X.row(static_cast<std::size_t>(m));
                double d2 = 0.0;
                for (std::size_t j = 0; j < X.cols(); ++j) {
                    const double d = base[j] - other[j];
                    d2 += d * d;
                }
                dist.emplace_back(d2, m);
            }
            std::partial_sort(dist.begin(), dist.begin() + k_eff, dist.end());
            const auto pick = dist[static_cast<std::size_t>(rng.uniform_index(static_cast<std::uint64_t>(k_eff)))];
            const double u = rng.uniform();
            auto nn = X.row(static_cast<std::size_t>(pick.second));
            for (std::size_t j = 0; j < X.cols(); ++j) rows(s, j) = base[j] + u * (nn[j] - base[j]);
        }
        return {rows, out_labels};
    }
};

Matrix vstack(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out(a.rows() + i, j) = b(i, j);
    return out;
}

} // namespace

PairedOutcome oversample_before_split(const Dataset& data, OversampleMethod method,
                                      double target_ratio, int k_neighbors,
                                      const ModelSpec& model, std::uint64_t task_seed, int cv_k) {
    if (target_ratio <= 0.0 || target_ratio > 0.5)
        throw std::invalid_argument("oversample_before_split: target_ratio must be in (0, 0.5]");
    const int n = static_cast<int>(data.n());
    const int n_pos = data.positives();
    const int minority_label = 2 * n_pos <= n ? 1 : 0;
    const int n_min = minority_label == 1 ? n_pos : n - n_pos;
    if (static_cast<double>(n_min) / n >= target_ratio)
        throw std::invalid_argument("oversample_before_split: dataset not imbalanced below target_ratio");
    if (k_neighbors >= n_min)
        throw std::invalid_argument("oversample_before_split: k_neighbors must be < minority count");

    ModelSpec spec = model;
    spec.seed = derive_seed(task_seed, "model");
    const Oversampler sampler{method, target_ratio, k_neighbors};
    const auto all_rows = identity_indices(data.n());

    // Leaky: augment the full table, then fold it. Synthetic rows land in
    // test folds with their sources in training; that is the modelled error.
    Rng leaky_rng(derive_seed(task_seed, "ovs"));
    auto [add_X, add_y] = sampler.augment(data.features, data.labels, all_rows, minority_label, leaky_rng);
    const Matrix aug_X = vstack(data.features, add_X);
    std::vector<int> aug_y = data.labels;
    aug_y.insert(aug_y.end(), add_y.begin(), add_y.end());
    const auto leaky_plan = folding::stratified_kfold(aug_y, cv_k, derive_seed(task_seed, "folds"));
    const double leaky_auc = cv_oof(aug_X, aug_y, leaky_plan, spec).pooled_auc;

    // Clean: fold the original table, oversample inside each training fold.
    const auto plan = shared_plan(data, task_seed, cv_k);
    Pooled clean;
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const auto& fold = plan.folds[f];
        Rng fold_rng(derive_seed(task_seed, "ovs_fold", f));
        auto [fx, fy] = sampler.augment(data.features, data.labels, fold.train, minority_label, fold_rng);
        const Matrix Xtr = vstack(data.features.take_rows(fold.train), fx);
        auto ytr = take(data.labels, fold.train);
        ytr.insert(ytr.end(), fy.begin(), fy.end());
        clean.add(score_fold(Xtr, ytr, data.features.take_rows(fold.test), spec),
                  take(data.labels, fold.test));
    }
    const char* name = method == OversampleMethod::random ? "random_oversample" : "smote";
    auto out = finish(clean.auc(), leaky_auc, plan.plan_hash, task_seed,
                      std::string(name) + "(fold)", std::string(name) + "(before_split)");
    out.extras["added_rows_leaky"] = static_cast<double>(add_y.size());
    out.extras["leaky_plan_hash"] = static_cast<double>(leaky_plan.plan_hash % (1ull << 52));
    return out;
}

// ---- compound and stacking ----

PairedOutcome compound_stack(const Dataset& data, const std::vector<ModelSpec>& pool,
                             std::uint64_t task_seed, int cv_k) {
    if (pool.empty()) throw std::invalid_argument("compound_stack: empty pool");
    const auto plan = shared_plan(data, task_seed, cv_k);
    const auto all_rows = identity_indices(data.n());
    const int top_m = std::max(1, static_cast<int>(data.p()) / 2);
    const double dup_rate = 0.1;
    const int peek_k = std::min<int>(10, static_cast<int>(pool.size()));

    std::vector<ModelSpec> candidates = pool;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        candidates[i].seed = derive_seed(task_seed, "cand", i);
    Rng pick_rng(derive_seed(task_seed, "clean_pick"));
    const auto pick = static_cast<std::size_t>(pick_rng.uniform_index(candidates.size()));

    struct Flags {
        bool global_fs = false;
        bool global_scale = false;
        bool dup = false;
        bool peek = false;
    };

    auto run_arm = [&](const Flags& flags) {
        Pooled pooled;
        std::vector<int> global_sel;
        if (flags.global_fs) global_sel = select_top_features(data.features, data.labels, all_rows, top_m);
        for (std::size_t f = 0; f < plan.folds.size(); ++f) {
            const auto& fold = plan.folds[f];
            const auto sel = flags.global_fs
                                 ? global_sel
                                 : select_top_features(data.features, data.labels, fold.train, top_m);
            const Matrix Xs = data.features.take_cols(sel);
            const auto fit_rows = flags.global_scale ? std::span<const int>(all_rows)
                                                     : std::span<const int>(fold.train);
            std::vector<bool> mask(Xs.cols(), false);
            const auto t = fit_transform(TransformKind::zscale, Xs, fit_rows, mask, {});
            const Matrix Xt = t->apply(Xs);

            std::vector<int> train_rows = fold.train;
            if (flags.dup) {
                const auto n_copy = static_cast<std::size_t>(dup_rate * static_cast<double>(fold.test.size()));
                if (n_copy > 0) {
                    Rng rng(derive_seed(task_seed, "dup", f));
                    auto shuffled = fold.test;
                    rng.shuffle(shuffled);
                    train_rows.insert(train_rows.end(), shuffled.begin(),
                                      shuffled.begin() + static_cast<std::ptrdiff_t>(n_copy));
                }
            }
            const Matrix Xtr = Xt.take_rows(train_rows);
            const Matrix Xte = Xt.take_rows(fold.test);
            const auto ytr = take(data.labels, train_rows);
            const auto yte = take(data.labels, fold.test);

            if (!flags.peek) {
                pooled.add(score_fold(Xtr, ytr, Xte, candidates[pick]), yte);
                continue;
            }
            Rng rng(derive_seed(task_seed, "peek", f));
            auto idx = identity_indices(candidates.size());
            for (int i = 0; i < peek_k; ++i) {
                const auto j = static_cast<std::size_t>(i) +
                               static_cast<std::size_t>(rng.uniform_index(idx.size() - static_cast<std::size_t>(i)));
                std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
            }
            std::vector<int> sampled(idx.begin(), idx.begin() + peek_k);
            std::sort(sampled.begin(), sampled.end());
            std::vector<std::vector<double>> cand_scores;
            std::vector<double> cand_aucs;
            for (int c : sampled) {
                cand_scores.push_back(score_fold(Xtr, ytr, Xte, candidates[static_cast<std::size_t>(c)]));
                cand_aucs.push_back(metrics::auc(cand_scores.back(), yte));
            }
            pooled.add(cand_scores[static_cast<std::size_t>(select_argmax(cand_aucs))], yte);
        }
        return pooled.auc();
    };

    const double clean = run_arm({});
    const double compound = run_arm({true, true, true, true});
    const double d_fs = run_arm({true, false, false, false}) - clean;
    const double d_scale = run_arm({false, true, false, false}) - clean;
    const double d_dup = run_arm({false, false, true, false}) - clean;
    const double d_peek = run_arm({false, false, false, true}) - clean;
    const double sum_individual = d_fs + d_scale + d_dup + d_peek;

    auto out = finish(clean, compound, plan.plan_hash, task_seed, "per_fold_pipeline+random_pick",
                      "global_scale+global_fs+dup+peek");
    out.extras["delta_fs"] = d_fs;
    out.extras["delta_scale"] = d_scale;
    out.extras["delta_dup"] = d_dup;
    out.extras["delta_peek"] = d_peek;
    out.extras["sum_individual"] = sum_individual;
    const bool defined = std::abs(sum_individual) > stats::kNoiseFloor;
    out.extras["ratio_defined"] = defined ? 1.0 : 0.0;
    out.extras["ratio"] = defined ? out.delta / sum_individual : 0.0;
    return out;
}

PairedOutcome oof_stacking(const Dataset& data, const std::vector<ModelSpec>& bases,
                           const ModelSpec& meta, StackMode mode, std::uint64_t task_seed, int cv_k) {
    if (bases.size() < 2) throw std::invalid_argument("oof_stacking: need >= 2 base specs");
    const auto plan = shared_plan(data, task_seed, cv_k);

    std::vector<ModelSpec> base_specs = bases;
    for (std::size_t b = 0; b < base_specs.size(); ++b)
        base_specs[b].seed = derive_seed(task_seed, "base", b);
    ModelSpec meta_spec = meta;
    meta_spec.seed = derive_seed(task_seed, "meta");

    // Baseline arm: the first base spec, evaluated honestly.
    const double baseline = cv_oof(data.features, data.labels, plan, base_specs.front()).pooled_auc;

    Pooled stacked;
    for (std::size_t f = 0; f < plan.folds.size(); ++f) {
        const auto& fold = plan.folds[f];
        const Matrix Xtr = data.features.take_rows(fold.train);
        const Matrix Xte = data.features.take_rows(fold.test);
        const auto ytr = take(data.labels, fold.train);
        const auto yte = take(data.labels, fold.test);

        Matrix z_train(Xtr.rows(), base_specs.size());
        if (mode == StackMode::oof) {
            int min_class = static_cast<int>(Xtr.rows());
            int pos = 0;
            for (int v : ytr) pos += v;
            min_class = std::min(pos, static_cast<int>(ytr.size()) - pos);
            const int inner_k = std::min(5, min_class);
            if (inner_k < 2) throw std::invalid_argument("oof_stacking: training fold too small for inner folds");
            const auto inner = folding::stratified_kfold(ytr, inner_k, derive_seed(task_seed, "inner", f));
            for (const auto& ifold : inner.folds) {
                for (std::size_t b = 0; b < base_specs.size(); ++b) {
                    const auto scores = score_fold(Xtr.take_rows(ifold.train), take(ytr, ifold.train),
                                                   Xtr.take_rows(ifold.test), base_specs[b]);
                    for (std::size_t t = 0; t < ifold.test.size(); ++t)
                        z_train(static_cast<std::size_t>(ifold.test[t]), b) = scores[t];
                }
            }
        }

        Matrix z_test(Xte.rows(), base_specs.size());
        for (std::size_t b = 0; b < base_specs.size(); ++b) {
            const auto fitted = models::fit(base_specs[b], Xtr, ytr);
            const auto te_scores = models::predict_scores(fitted, Xte);
            for (std::size_t i = 0; i < te_scores.size(); ++i) z_test(i, b) = te_scores[i];
            if (mode == StackMode::in_fold) {
                const auto tr_scores = models::predict_scores(fitted, Xtr); // in-sample
                for (std::size_t i = 0; i < tr_scores.size(); ++i) z_train(i, b) = tr_scores[i];
            }
        }
        stacked.add(score_fold(z_train, ytr, z_test, meta_spec), yte);
    }

    const char* mode_name = mode == StackMode::oof ? "oof" : "in_fold";
    return finish(baseline, stacked.auc(), plan.plan_hash, task_seed,
                  "base0_honest_cv", std::string("stacking_") + mode_name);
}

// ---- null control and boundary ----

PairedOutcome placebo(const Dataset& data, const ModelSpec& model, std::uint64_t seed_a,
                      std::uint64_t seed_b, std::uint64_t task_seed, int cv_k) {
    if (seed_a == seed_b) throw std::invalid_argument("placebo: seeds must differ");
    const auto plan = shared_plan(data, task_seed, cv_k);
    ModelSpec spec_a = model, spec_b = model;
    spec_a.seed = seed_a;
    spec_b.seed = seed_b;
    const double auc_a = cv_oof(data.features, data.labels, plan, spec_a).pooled_auc;
    const double auc_b = cv_oof(data.features, data.labels, plan, spec_b).pooled_auc;
    return finish(auc_a, auc_b, plan.plan_hash, task_seed,
                  models::to_string(model.algorithm) + "+seed_a",
                  models::to_string(model.algorithm) + "+seed_b");
}

BoundaryResult boundary_comparison(const Dataset& data, const ModelSpec& model, int walk_k,
                                   std::uint64_t task_seed, int cv_k) {
    if (!data.time_index) throw std::invalid_argument("boundary_comparison: time_index required");
    ModelSpec spec = model;
    spec.seed = derive_seed(task_seed, "model");

    BoundaryResult res;
    const auto random_plan = shared_plan(data, task_seed, cv_k);
    res.auc_random = cv_oof(data.features, data.labels, random_plan, spec).pooled_auc;

    const auto walk = folding::walk_forward(*data.time_index, walk_k);
    res.walk_plan_hash = walk.plan_hash;
    res.auc_walk = cv_oof(data.features, data.labels, walk, spec).pooled_auc;

    const auto matched = folding::size_matched_random(walk, derive_seed(task_seed, "size_matched"));
    res.auc_size_matched = cv_oof(data.features, data.labels, matched, spec).pooled_auc;

    res.pure_temporal_effect = res.auc_size_matched - res.auc_walk;
    return res;
}

PairedOutcome group_folding_experiment(const Dataset& data, const ModelSpec& model,
                                       std::uint64_t task_seed, int cv_k) {
    if (!data.group_id) throw std::invalid_argument("group_folding_experiment: group_id required");
    ModelSpec spec = model;
    spec.seed = derive_seed(task_seed, "model");
    const auto group_plan = folding::group_kfold(*data.group_id, cv_k, derive_seed(task_seed, "folds"));
    const auto random_plan = shared_plan(data, task_seed, cv_k);
    const double clean = cv_oof(data.features, data.labels, group_plan, spec).pooled_auc;
    const double leaky = cv_oof(data.features, data.labels, random_plan, spec).pooled_auc;
    auto out = finish(clean, leaky, random_plan.plan_hash, task_seed,
                      models::to_string(model.algorithm) + "+group_kfold",
                      models::to_string(model.algorithm) + "+random_cv");
    out.extras["group_plan_hash"] = static_cast<double>(group_plan.plan_hash % (1ull << 52));
    return out;
}

MetricFlipResult metric_flip_experiment(const Dataset& data, const ModelSpec& model_a,
                                        const ModelSpec& model_b, std::uint64_t task_seed, int cv_k) {
    const auto plan = shared_plan(data, task_seed, cv_k);
    ModelSpec a = model_a, b = model_b;
    a.seed = derive_seed(task_seed, "model_a");
    b.seed = derive_seed(task_seed, "model_b");
    const auto oof_a = cv_oof(data.features, data.labels, plan, a);
    const auto oof_b = cv_oof(data.features, data.labels, plan, b);
    MetricFlipResult res;
    res.metrics_a = metrics::confusion_metrics(oof_a.scores, oof_a.labels);
    res.metrics_b = metrics::confusion_metrics(oof_b.scores, oof_b.labels);
    res.report = metrics::ranking_flip(res.metrics_a, res.metrics_b);
    res.fold_plan_hash = plan.plan_hash;
    return res;
}

} // namespace leaklab::inject
