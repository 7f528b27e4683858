#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leaklab/dataset.hpp"
#include "leaklab/folding.hpp"
#include "leaklab/metrics.hpp"
#include "leaklab/models.hpp"
#include "leaklab/transforms.hpp"

namespace leaklab::inject {

enum class ExpId { A, E, F, T, CE, AB, B, AI, AP, AQ, BB, AC, FS, G, H, BA, J, AK, AE, AN, AO, BD, GP, MF };
enum class LeakClass { I, II, III, IV, null_control, diagnostic };

std::string to_string(ExpId id);
std::string to_string(LeakClass c);
ExpId exp_from_string(const std::string& s);
LeakClass leak_class_of(ExpId id);

// One configured experiment. Parameters are kept as strings so the record
// snapshot round-trips exactly; num()/str() parse on access.
struct ExperimentSpec {
    ExpId exp_id = ExpId::A;
    std::map<std::string, std::string> params;
    int reps = 5;

    double num(const std::string& key, double fallback) const;
    std::string str(const std::string& key, const std::string& fallback) const;
};

void validate(const ExperimentSpec& spec);

struct WorkflowArm {
    enum class Kind { clean, leaky };
    Kind arm = Kind::clean;
    std::string pipeline;             // human-readable step list
    std::uint64_t fold_plan_hash = 0;
    std::uint64_t base_seed = 0;
};

struct PairedOutcome {
    double auc_clean = 0.0;
    double auc_leaky = 0.0;
    double delta = 0.0; // leaky - clean, exact
    std::uint64_t fold_plan_hash = 0;
    WorkflowArm clean_arm;
    WorkflowArm leaky_arm;
    std::map<std::string, double> extras; // experiment-specific outputs
};

// ---- shared CV plumbing ----

// Pooled out-of-fold scores: each row scored by the fold model that never
// trained on it. Returned vectors are (scores, labels) concatenated in fold
// order, one entry per (fold, test row) instance.
struct OofResult {
    std::vector<double> scores;
    std::vector<int> labels;
    std::vector<double> fold_aucs;
    double pooled_auc = 0.0;
};

OofResult cv_oof(const Matrix& X, std::span<const int> y, const folding::FoldPlan& plan,
                 const models::ModelSpec& spec);

// Argmax with ties resolved to the lowest index.
int select_argmax(std::span<const double> values);

// ---- injectors ----
// Every injector derives all of its randomness from task_seed, builds one
// fold plan shared by both arms (exceptions documented), and reports
// delta = auc_leaky - auc_clean.

PairedOutcome class1_global_transform(const corpus::Dataset& data, TransformKind kind,
                                      const TransformParams& params,
                                      const models::ModelSpec& model,
                                      std::uint64_t task_seed, int cv_k = 5);

enum class SelectionRule { peek_configs, screen_algorithms, best_seed };

// Clean-arm convention for peek/screen: a uniformly drawn pool member (the
// peeking experiment's baseline) or the fixed first pool entry (the
// n-scaling experiment's single-algorithm path).
enum class CleanBaseline { random_pick, first_candidate };

// peek/screen: the leaky arm evaluates a per-fold random k-subset of the
// pool on that fold's test rows and keeps the winner's test scores; the
// clean arm is one pool member evaluated honestly (see CleanBaseline).
// best_seed: k_evaluated reseeded CV runs of pool[0]; leaky = best pooled
// AUC, clean = mean pooled AUC.
PairedOutcome select_best_by_holdout(const corpus::Dataset& data,
                                     const std::vector<models::ModelSpec>& pool,
                                     int k_evaluated, SelectionRule rule,
                                     std::uint64_t task_seed, int cv_k = 5,
                                     CleanBaseline baseline = CleanBaseline::random_pick);

// Early stopping for the SGD learner. Both arms share one full-training
// weight path per fold; they differ only in which epoch the stop source
// picks (test fold vs an inner 20% validation split).
PairedOutcome early_stopped_fit(const corpus::Dataset& data, const models::SgdOptions& sgd,
                                int patience, std::uint64_t task_seed, int cv_k = 5);

// Epoch chosen by a patience rule on a per-epoch loss trace: the best epoch
// seen when the trace fails to improve for `patience` epochs, or the final
// epoch when stopping never triggers.
int stop_epoch(std::span<const double> losses, int patience);

// Target encoding of every categorical column (full-data vs fold-train
// scope), then the given model.
PairedOutcome target_encode_experiment(const corpus::Dataset& data, double smoothing,
                                       const models::ModelSpec& model,
                                       std::uint64_t task_seed, int cv_k = 5);

PairedOutcome feature_select_experiment(const corpus::Dataset& data, int top_m,
                                        const models::ModelSpec& model,
                                        std::uint64_t task_seed, int cv_k = 5);

PairedOutcome inject_duplicates(const corpus::Dataset& data, double rate,
                                const models::ModelSpec& model,
                                std::uint64_t task_seed, int cv_k = 5);

enum class OversampleMethod { random, smote };

// The one injector whose arms cannot share a fold plan: the leaky arm folds
// the augmented table (that is the mistake being modelled). Both arms share
// the base seed.
PairedOutcome oversample_before_split(const corpus::Dataset& data, OversampleMethod method,
                                      double target_ratio, int k_neighbors,
                                      const models::ModelSpec& model,
                                      std::uint64_t task_seed, int cv_k = 5);

// Four simultaneous leaks (global zscale + full-data feature selection +
// 10% duplication + per-fold peeking) plus the four injectors individually;
// extras carry the individual deltas and the sub-additivity ratio.
PairedOutcome compound_stack(const corpus::Dataset& data,
                             const std::vector<models::ModelSpec>& pool,
                             std::uint64_t task_seed, int cv_k = 5);

enum class StackMode { oof, in_fold };

// Stacked ensemble vs the first base spec evaluated honestly. oof generates
// meta-training scores through an inner fold loop; in_fold trains the meta
// model on in-sample base scores.
PairedOutcome oof_stacking(const corpus::Dataset& data,
                           const std::vector<models::ModelSpec>& bases,
                           const models::ModelSpec& meta, StackMode mode,
                           std::uint64_t task_seed, int cv_k = 5);

// Two methodologically clean runs that differ only in model seed; the delta
// distribution is the measurement noise floor.
PairedOutcome placebo(const corpus::Dataset& data, const models::ModelSpec& model,
                      std::uint64_t seed_a, std::uint64_t seed_b,
                      std::uint64_t task_seed, int cv_k = 5);

struct BoundaryResult {
    double auc_random = 0.0;
    double auc_walk = 0.0;
    double auc_size_matched = 0.0;
    double pure_temporal_effect = 0.0; // size_matched - walk
    std::uint64_t walk_plan_hash = 0;
};

BoundaryResult boundary_comparison(const corpus::Dataset& data, const models::ModelSpec& model,
                                   int walk_k, std::uint64_t task_seed, int cv_k = 5);

// Random stratified CV vs group k-fold on a grouped dataset.
PairedOutcome group_folding_experiment(const corpus::Dataset& data, const models::ModelSpec& model,
                                       std::uint64_t task_seed, int cv_k = 5);

struct MetricFlipResult {
    std::vector<metrics::MetricValue> metrics_a; // first model
    std::vector<metrics::MetricValue> metrics_b; // second model
    metrics::FlipReport report;
    std::uint64_t fold_plan_hash = 0;
};

MetricFlipResult metric_flip_experiment(const corpus::Dataset& data,
                                        const models::ModelSpec& model_a,
                                        const models::ModelSpec& model_b,
                                        std::uint64_t task_seed, int cv_k = 5);

} // namespace leaklab::inject
