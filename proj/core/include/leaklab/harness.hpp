#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "leaklab/config.hpp"
#include "leaklab/dataset.hpp"
#include "leaklab/inject.hpp"
#include "leaklab/stats.hpp"

namespace leaklab::harness {

// One completed (experiment, dataset, repetition) measurement. Serialized as
// one JSONL object with exactly these fields, snake_case keys, floats at 17
// significant digits. params holds the configured inputs plus x_-prefixed
// outputs some analyses need (e.g. AO interval bounds).
struct RunRecord {
    std::string run_id;
    std::string exp_id;
    std::string leak_class;
    std::string dataset_id;
    std::string split; // discovery | confirmation
    std::string algorithm;
    std::map<std::string, std::string> params;
    int rep = 0;
    std::uint64_t fold_plan_hash = 0;
    double auc_clean = 0.0;
    double auc_leaky = 0.0;
    double delta = 0.0;
    std::int64_t wall_time_ms = 0;
};

// Emitted instead of a RunRecord when a dataset fails an experiment
// precondition; the suite never aborts on these.
struct SkipRecord {
    std::string run_id;
    std::string exp_id;
    std::string dataset_id;
    int rep = 0;
    std::string reason;
};

std::string to_jsonl(const RunRecord& r);
std::string to_jsonl(const SkipRecord& r);

struct ParsedLine {
    std::optional<RunRecord> record;
    std::optional<SkipRecord> skip;
};

// Parses one JSONL line; throws on malformed JSON or missing fields.
ParsedLine parse_jsonl(const std::string& line);

// Deterministic per-task seed: digest(base_seed, exp_id, dataset_id, rep).
std::uint64_t task_seed(std::uint64_t base_seed, const std::string& exp_id,
                        const std::string& dataset_id, int rep);

// Runs one task. Most experiments yield a single record; MF yields one per
// metric and AO one per CI method. Precondition violations surface as
// std::invalid_argument and become skip records in run_suite.
std::vector<RunRecord> run_task(const inject::ExperimentSpec& spec, const corpus::Dataset& data,
                                int rep, std::uint64_t base_seed, const LabConfig& config);

struct SuiteOptions {
    std::uint64_t base_seed = 42;
    int jobs = 1;
    bool record_timing = false; // off by default: keeps output byte-deterministic
};

struct SuiteSummary {
    int n_records = 0;
    int n_skips = 0;
    int n_datasets = 0;
    std::string out_path;
};

// Executes every (spec, dataset, rep) task on a worker pool and writes one
// sorted JSONL file. Output bytes are independent of the job count: records
// are sorted by (exp_id, dataset_id, rep, spec position) before writing.
SuiteSummary run_suite(const std::vector<corpus::Dataset>& datasets,
                       const std::vector<inject::ExperimentSpec>& specs,
                       const LabConfig& config, const SuiteOptions& opts,
                       const std::string& out_path);

// The standard experiment list; ids = {"all"} expands every experiment with
// its default parameterization (dose schedules included).
std::vector<inject::ExperimentSpec> default_catalogue(const std::vector<std::string>& ids,
                                                      const LabConfig& config);

// ---- analysis ----

struct ExperimentReport {
    std::string exp_id;
    std::string leak_class;
    std::map<std::string, stats::EffectSummary> by_split; // discovery/confirmation/pooled
    // (dataset_id, per-dataset mean delta) pairs on the pooled split
    std::vector<std::pair<std::string, double>> dataset_deltas;
};

struct DosePoint {
    double dose = 0.0; // K, k, rate or subsample size
    double mean_delta = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    int n = 0;
};

struct Report {
    std::string run_id;
    int n_records = 0;
    int n_skips = 0;
    int n_corrupt_lines = 0;
    std::vector<ExperimentReport> experiments;
    std::map<std::string, std::vector<DosePoint>> dose_curves;   // "AP:RF", "B", "H:DT", ...
    std::map<std::string, std::vector<DosePoint>> nscaling;      // mech -> per-size points
    std::map<std::string, double> coverage;                       // "M1_naive_z:LR" -> coverage
    std::map<std::string, int> coverage_n;
    // (subsample size, decomposition) rows; size 0 marks the corpus-level row
    std::vector<std::pair<double, stats::DecompositionResult>> decomposition;
    std::map<std::string, double> extras;                         // scalar diagnostics
};

struct AnalyzeOptions {
    std::optional<std::string> experiment_filter; // exp id
    std::optional<std::string> split_filter;      // discovery | confirmation
};

Report analyze(const std::string& records_path, const AnalyzeOptions& opts = {});

// Serializes a Report to report.json under out_dir (created if needed).
void save_report(const Report& report, const std::string& out_dir);
Report load_report(const std::string& report_dir);

// Renders figure-data CSVs (summary, per-dataset deltas, dose curves,
// n-scaling, coverage, decomposition) or the markdown taxonomy table into
// out_dir. Re-running on the same report produces identical bytes.
void emit_report(const Report& report, const std::string& format, const std::string& out_dir);

} // namespace leaklab::harness
