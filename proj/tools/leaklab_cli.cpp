// leaklab: generate synthetic corpora, run paired clean/leaky experiment
// suites over them, and analyze the recorded results.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 every dataset skipped.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "leaklab/csv.hpp"
#include "leaklab/harness.hpp"
#include "leaklab/rng.hpp"
#include "leaklab/synth.hpp"

namespace fs = std::filesystem;
using namespace leaklab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitAllSkipped = 3;

std::vector<std::string> split_csv_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cmd_gen(const std::string& spec_path, const std::string& out_dir) {
    if (!fs::exists(spec_path)) {
        std::cerr << "gen: spec file not found: " << spec_path << "\n";
        return kExitIo;
    }
    const auto cfg = harness::load_config(spec_path);
    const int count = static_cast<int>(cfg.num("count", 20));
    const std::string prefix = cfg.str("prefix", "synth");
    const std::string family = cfg.str("family", "iid");
    const auto base_seed = static_cast<std::uint64_t>(cfg.num("seed", 42));

    fs::create_directories(out_dir);
    std::string manifest = "id,n,p,split\n";
    for (int i = 0; i < count; ++i) {
        Rng rng(derive_seed(base_seed, "dataset", static_cast<std::uint64_t>(i)));
        corpus::SyntheticSpec spec;
        const int jitter = static_cast<int>(cfg.num("n_jitter", 0));
        spec.n = static_cast<int>(cfg.num("n", 2000)) + (jitter > 0 ? rng.uniform_int(-jitter, jitter) : 0);
        spec.p = static_cast<int>(cfg.num("p", 18));
        spec.class_sep = rng.uniform(cfg.num("class_sep_min", 0.15), cfg.num("class_sep_max", 0.6));
        spec.imbalance = rng.uniform(cfg.num("imbalance_min", 0.2), cfg.num("imbalance_max", 0.5));
        if (rng.uniform() < cfg.num("categorical_fraction", 0.0))
            spec.n_categorical = static_cast<int>(cfg.num("n_categorical", 4));
        spec.drift = cfg.num("drift", 0.0);
        spec.n_groups = static_cast<int>(cfg.num("n_groups", 0));
        spec.group_offset = cfg.num("group_offset", 0.0);
        spec.seed = derive_seed(base_seed, "spec", static_cast<std::uint64_t>(i));

        corpus::Dataset d;
        if (family == "temporal") d = corpus::gen_temporal_drift(spec);
        else if (family == "grouped") d = corpus::gen_grouped(spec);
        else d = corpus::gen_synthetic(spec);

        char id[64];
        std::snprintf(id, sizeof id, "%s-%03d", prefix.c_str(), i);
        d.id = id;
        corpus::rehash(d);
        corpus::save_csv(d, (fs::path(out_dir) / (std::string(id) + ".csv")).string());
        manifest += std::string(id) + "," + std::to_string(d.n()) + "," + std::to_string(d.p()) +
                    "," + corpus::to_string(corpus::assign_split(id)) + "\n";
    }
    std::ofstream mf(fs::path(out_dir) / "manifest.csv");
    if (!mf) {
        std::cerr << "gen: cannot write manifest\n";
        return kExitIo;
    }
    mf << manifest;
    std::cout << "gen: wrote " << count << " dataset(s) to " << out_dir << "\n";
    return kExitOk;
}

std::vector<corpus::Dataset> load_corpus(const std::string& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".csv" && entry.path().filename() != "manifest.csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<corpus::Dataset> datasets;
    for (const auto& path : files) {
        std::ifstream probe(path);
        std::string header;
        std::getline(probe, header);
        corpus::CsvOptions opts;
        if (header.find("time_index") != std::string::npos) opts.time_column = "time_index";
        if (header.find("group_id") != std::string::npos) opts.group_column = "group_id";
        datasets.push_back(corpus::load_csv(path.string(), opts));
    }
    return datasets;
}

int cmd_run(const std::string& experiments, const std::string& corpus_dir, int reps,
            std::uint64_t seed, int jobs, const std::string& out_path,
            const std::string& config_path, bool timing) {
    harness::LabConfig config;
    if (!config_path.empty()) {
        if (!fs::exists(config_path)) {
            std::cerr << "run: config file not found: " << config_path << "\n";
            return kExitIo;
        }
        config = harness::load_config(config_path);
    }
    if (!fs::is_directory(corpus_dir)) {
        std::cerr << "run: corpus directory not found: " << corpus_dir << "\n";
        return kExitIo;
    }
    std::vector<corpus::Dataset> datasets;
    try {
        datasets = load_corpus(corpus_dir);
    } catch (const std::exception& e) {
        std::cerr << "run: failed to load corpus: " << e.what() << "\n";
        return kExitIo;
    }
    if (datasets.empty()) {
        std::cerr << "run: no datasets in " << corpus_dir << "\n";
        return kExitIo;
    }

    std::vector<inject::ExperimentSpec> specs;
    try {
        specs = harness::default_catalogue(split_csv_list(experiments), config);
    } catch (const std::exception& e) {
        std::cerr << "run: " << e.what() << "\n";
        return kExitUsage;
    }
    if (specs.empty()) {
        std::cerr << "run: no experiments matched '" << experiments << "'\n";
        return kExitUsage;
    }
    if (reps > 0)
        for (auto& spec : specs) spec.reps = reps;

    harness::SuiteOptions opts;
    opts.base_seed = seed;
    opts.jobs = jobs;
    opts.record_timing = timing;
    harness::SuiteSummary summary;
    try {
        summary = harness::run_suite(datasets, specs, config, opts, out_path);
    } catch (const std::exception& e) {
        std::cerr << "run: " << e.what() << "\n";
        return kExitIo;
    }
    std::cout << "run: " << summary.n_records << " record(s), " << summary.n_skips
              << " skip(s) -> " << summary.out_path << "\n";
    if (summary.n_records == 0 && summary.n_skips > 0) {
        std::cerr << "run: every dataset was skipped\n";
        return kExitAllSkipped;
    }
    return kExitOk;
}

int cmd_analyze(const std::string& in_path, const std::string& split,
                const std::string& experiment, const std::string& out_dir) {
    if (!fs::exists(in_path)) {
        std::cerr << "analyze: records file not found: " << in_path << "\n";
        return kExitIo;
    }
    harness::AnalyzeOptions opts;
    if (!split.empty()) opts.split_filter = split;
    if (!experiment.empty()) opts.experiment_filter = experiment;
    try {
        const auto report = harness::analyze(in_path, opts);
        harness::save_report(report, out_dir);
        std::cout << "analyze: " << report.n_records << " record(s), " << report.n_skips
                  << " skip(s), " << report.n_corrupt_lines << " corrupt line(s) -> " << out_dir
                  << "/report.json\n";
    } catch (const std::exception& e) {
        std::cerr << "analyze: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int cmd_report(const std::string& in_dir, const std::string& format, const std::string& out_dir) {
    if (format != "csv" && format != "markdown") {
        std::cerr << "report: format must be csv or markdown\n";
        return kExitUsage;
    }
    if (!fs::exists(fs::path(in_dir) / "report.json")) {
        std::cerr << "report: " << in_dir << "/report.json not found\n";
        return kExitIo;
    }
    try {
        const auto report = harness::load_report(in_dir);
        harness::emit_report(report, format, out_dir.empty() ? in_dir : out_dir);
        std::cout << "report: wrote " << format << " files to "
                  << (out_dir.empty() ? in_dir : out_dir) << "\n";
    } catch (const std::exception& e) {
        std::cerr << "report: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"leaklab: controlled data-leakage experiments over tabular CV workflows"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset corpus");
    std::string gen_spec, gen_out;
    gen->add_option("--spec", gen_spec, "corpus spec file (key = value)")->required();
    gen->add_option("--out", gen_out, "output directory")->required();

    auto* run = app.add_subcommand("run", "Run experiments over a corpus");
    std::string run_experiments = "all", run_corpus, run_out = "results.jsonl", run_config;
    int run_reps = 0, run_jobs = 1;
    std::uint64_t run_seed = 42;
    bool run_timing = false;
    run->add_option("--experiments", run_experiments, "comma-separated experiment ids or 'all'");
    run->add_option("--corpus", run_corpus, "corpus directory of CSVs")->required();
    run->add_option("--reps", run_reps, "repetitions per (experiment, dataset)");
    run->add_option("--seed", run_seed, "base seed");
    run->add_option("--jobs", run_jobs, "worker threads");
    run->add_option("--out", run_out, "output JSONL path");
    run->add_option("--config", run_config, "key/value config file");
    run->add_flag("--timing", run_timing, "record wall times (breaks byte-determinism)");

    auto* analyze = app.add_subcommand("analyze", "Summarize a results JSONL file");
    std::string an_in, an_split, an_exp, an_out = "report";
    analyze->add_option("--in", an_in, "results.jsonl")->required();
    analyze->add_option("--split", an_split, "discovery|confirmation")
        ->check(CLI::IsMember({"discovery", "confirmation"}));
    analyze->add_option("--experiment", an_exp, "restrict to one experiment id");
    analyze->add_option("--out", an_out, "report directory");

    auto* report = app.add_subcommand("report", "Render report.json to csv or markdown");
    std::string rp_in = "report", rp_format = "csv", rp_out;
    report->add_option("--in", rp_in, "report directory (with report.json)");
    report->add_option("--format", rp_format, "csv|markdown");
    report->add_option("--out", rp_out, "output directory (default: --in)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (gen->parsed()) return cmd_gen(gen_spec, gen_out);
    if (run->parsed())
        return cmd_run(run_experiments, run_corpus, run_reps, run_seed, run_jobs, run_out,
                       run_config, run_timing);
    if (analyze->parsed()) return cmd_analyze(an_in, an_split, an_exp, an_out);
    if (report->parsed()) return cmd_report(rp_in, rp_format, rp_out);
    return kExitUsage;
}
