#pragma once

#include <map>
#include <string>
#include <vector>

#include "leaklab/models.hpp"

namespace leaklab::harness {

// Runtime configuration: frozen hyperparameter defaults, the 19-candidate
// peeking pool and the screening pool, overridable through a plain key/value
// file (see README for the grammar and the default table).
struct LabConfig {
    std::map<std::string, std::string> values;

    double num(const std::string& key, double fallback) const;
    std::string str(const std::string& key, const std::string& fallback) const;

    int cv_k() const { return static_cast<int>(num("cv.k", 5)); }
    int default_reps() const { return static_cast<int>(num("runner.reps", 5)); }

    // Defaults per algorithm with any "<algo>.<key>" overrides applied.
    models::ModelSpec model_default(models::Algorithm a) const;

    // 9 random forests, 5 logistic regressions, 5 decision trees. Entirely
    // replaced by pool.<i>.* keys when present.
    std::vector<models::ModelSpec> peeking_pool() const;

    // One default spec per algorithm, LR first.
    std::vector<models::ModelSpec> screen_pool() const;

    // Multi-algorithm pool for the n-scaling peeking path; the first entry
    // is the single-algorithm clean baseline.
    std::vector<models::ModelSpec> nscaling_pool() const;

    models::SgdOptions sgd_options() const;
};

// `key = value` per line, '#' comments, blank lines ignored.
LabConfig load_config(const std::string& path);
LabConfig parse_config(const std::string& text);

} // namespace leaklab::harness
