#include "leaklab/models.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "leaklab/models_detail.hpp"

namespace leaklab::models {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::LR: return "LR";
        case Algorithm::GNB: return "GNB";
        case Algorithm::DT: return "DT";
        case Algorithm::RF: return "RF";
        case Algorithm::KNN: return "KNN";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "LR") return Algorithm::LR;
    if (s == "GNB") return Algorithm::GNB;
    if (s == "DT") return Algorithm::DT;
    if (s == "RF") return Algorithm::RF;
    if (s == "KNN") return Algorithm::KNN;
    throw std::invalid_argument("unknown algorithm: " + s);
}

namespace {

const std::map<Algorithm, std::set<std::string>>& valid_keys() {
    static const std::map<Algorithm, std::set<std::string>> keys = {
        {Algorithm::LR, {"learning_rate", "epochs", "l2"}},
        {Algorithm::GNB, {"var_smoothing"}},
        {Algorithm::DT, {"max_depth", "min_leaf"}},
        {Algorithm::RF, {"n_trees", "max_depth", "bootstrap_fraction", "min_leaf"}},
        {Algorithm::KNN, {"k"}},
    };
    return keys;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument("model spec: " + msg);
}

} // namespace

void validate(const ModelSpec& spec) {
    const auto& allowed = valid_keys().at(spec.algorithm);
    for (const auto& [key, _] : spec.hyperparameters)
        require(allowed.count(key) > 0, "key '" + key + "' invalid for " + to_string(spec.algorithm));
    switch (spec.algorithm) {
        case Algorithm::LR:
            require(spec.get("learning_rate", 0.1) > 0, "learning_rate must be > 0");
            require(spec.get("epochs", 200) >= 1, "epochs must be >= 1");
            require(spec.get("l2", 1e-4) >= 0, "l2 must be >= 0");
            break;
        case Algorithm::GNB:
            require(spec.get("var_smoothing", 1e-9) >= 0, "var_smoothing must be >= 0");
            break;
        case Algorithm::DT:
            require(spec.get("max_depth", 0) >= 0, "max_depth must be >= 0");
            require(spec.get("min_leaf", 1) >= 1, "min_leaf must be >= 1");
            break;
        case Algorithm::RF:
            require(spec.get("n_trees", 20) >= 1, "n_trees must be >= 1");
            require(spec.get("max_depth", 10) >= 0, "max_depth must be >= 0");
            require(spec.get("min_leaf", 1) >= 1, "min_leaf must be >= 1");
            require(spec.get("bootstrap_fraction", 1.0) > 0 && spec.get("bootstrap_fraction", 1.0) <= 1.0,
                    "bootstrap_fraction must be in (0, 1]");
            break;
        case Algorithm::KNN:
            require(spec.get("k", 5) >= 1, "k must be >= 1");
            break;
    }
}

ModelSpec default_spec(Algorithm a, std::uint64_t seed) {
    ModelSpec spec;
    spec.algorithm = a;
    spec.seed = seed;
    switch (a) {
        case Algorithm::LR: spec.hyperparameters = {{"learning_rate", 0.1}, {"epochs", 200}, {"l2", 1e-4}}; break;
        case Algorithm::GNB: spec.hyperparameters = {{"var_smoothing", 1e-9}}; break;
        case Algorithm::DT: spec.hyperparameters = {{"max_depth", 0}, {"min_leaf", 1}}; break;
        case Algorithm::RF:
            spec.hyperparameters = {{"n_trees", 20}, {"max_depth", 10}, {"bootstrap_fraction", 1.0}, {"min_leaf", 1}};
            break;
        case Algorithm::KNN: spec.hyperparameters = {{"k", 5}}; break;
    }
    return spec;
}

FittedModel fit(const ModelSpec& spec, const Matrix& X, std::span<const int> y) {
    validate(spec);
    if (X.rows() != y.size()) throw std::invalid_argument("fit: X rows != y length");
    if (X.rows() < 2) throw std::invalid_argument("fit: need at least 2 rows");
    int pos = 0;
    for (int v : y) {
        if (v != 0 && v != 1) throw std::invalid_argument("fit: labels must be 0/1");
        pos += v;
    }
    if (pos == 0 || pos == static_cast<int>(y.size()))
        throw std::invalid_argument("fit: single-class y");

    FittedModel m;
    m.spec = spec;
    m.fitted_rows = X.rows();
    switch (spec.algorithm) {
        case Algorithm::LR: m.impl = detail::fit_logreg(spec, X, y); break;
        case Algorithm::GNB: m.impl = detail::fit_gnb(spec, X, y); break;
        case Algorithm::DT: m.impl = detail::fit_tree(spec, X, y); break;
        case Algorithm::RF: m.impl = detail::fit_forest(spec, X, y); break;
        case Algorithm::KNN: m.impl = detail::fit_knn(spec, X, y); break;
    }
    return m;
}

std::vector<double> predict_scores(const FittedModel& model, const Matrix& X) {
    if (!model.impl) throw std::invalid_argument("predict_scores: model not fitted");
    if (X.rows() == 0) return {};
    if (X.cols() != model.impl->n_features())
        throw std::invalid_argument("predict_scores: feature count mismatch");
    return model.impl->score(X);
}

} // namespace leaklab::models
