#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "leaklab/matrix.hpp"

namespace leaklab::models {

enum class Algorithm { LR, GNB, DT, RF, KNN };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

// Hyperparameter keys per algorithm:
//   LR  : learning_rate, epochs, l2
//   GNB : var_smoothing
//   DT  : max_depth (0 = unlimited), min_leaf
//   RF  : n_trees, max_depth, bootstrap_fraction, min_leaf
//   KNN : k
// Unknown keys and out-of-range values are rejected by validate().
struct ModelSpec {
    Algorithm algorithm = Algorithm::LR;
    std::map<std::string, double> hyperparameters;
    std::uint64_t seed = 0;

    double get(const std::string& key, double fallback) const {
        auto it = hyperparameters.find(key);
        return it == hyperparameters.end() ? fallback : it->second;
    }
};

void validate(const ModelSpec& spec);

// Frozen defaults used throughout the experiment catalogue; see the README
// configuration table.
ModelSpec default_spec(Algorithm a, std::uint64_t seed = 0);

class Model {
public:
    virtual ~Model() = default;
    virtual std::vector<double> score(const Matrix& X) const = 0;
    virtual std::size_t n_features() const = 0;
};

struct FittedModel {
    std::shared_ptr<const Model> impl;
    ModelSpec spec;
    std::size_t fitted_rows = 0;
};

// Deterministic in (spec, X, y); LR ignores the seed entirely. Requires at
// least 2 rows and both classes in y.
FittedModel fit(const ModelSpec& spec, const Matrix& X, std::span<const int> y);

// Scores in [0, 1], higher = more positive. Pure. Empty X gives an empty
// vector; a column-count mismatch throws.
std::vector<double> predict_scores(const FittedModel& model, const Matrix& X);

// ---- iterative-training hooks (early-stopping experiment) ----

struct LinearParams {
    std::vector<double> w;
    double b = 0.0;
};

std::vector<double> linear_scores(const LinearParams& params, const Matrix& X);
double log_loss(const LinearParams& params, const Matrix& X, std::span<const int> y);

struct SgdOptions {
    double learning_rate = 0.05;
    double l2 = 1e-4;
    int epochs = 150;
    int batch = 32;
    std::uint64_t seed = 0;
};

// Mini-batch SGD logistic regression with a seeded per-epoch shuffle.
// Returns the weight snapshot after every epoch (index e = e+1 epochs done).
std::vector<LinearParams> sgd_logreg_path(const Matrix& X, std::span<const int> y,
                                          const SgdOptions& opts);

// Regularized mean log-loss after each full-batch GD epoch; test hook for
// the descent property of the default LR trainer.
std::vector<double> logreg_loss_path(const Matrix& X, std::span<const int> y,
                                     double learning_rate, double l2, int epochs);

} // namespace leaklab::models
