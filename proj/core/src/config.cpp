#include "leaklab/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace leaklab::harness {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string algo_prefix(models::Algorithm a) {
    switch (a) {
        case models::Algorithm::LR: return "lr";
        case models::Algorithm::GNB: return "gnb";
        case models::Algorithm::DT: return "dt";
        case models::Algorithm::RF: return "rf";
        case models::Algorithm::KNN: return "knn";
    }
    return "?";
}

} // namespace

double LabConfig::num(const std::string& key, double fallback) const {
    auto it = values.find(key);
    if (it == values.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' is not numeric: " + it->second);
    }
}

std::string LabConfig::str(const std::string& key, const std::string& fallback) const {
    auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

models::ModelSpec LabConfig::model_default(models::Algorithm a) const {
    models::ModelSpec spec = models::default_spec(a);
    const std::string prefix = algo_prefix(a) + ".";
    for (auto& [key, value] : spec.hyperparameters) {
        auto it = values.find(prefix + key);
        if (it != values.end()) value = std::stod(it->second);
    }
    models::validate(spec);
    return spec;
}

std::vector<models::ModelSpec> LabConfig::peeking_pool() const {
    // File-defined pool wins when pool.0.algorithm is present.
    if (values.count("pool.0.algorithm")) {
        std::vector<models::ModelSpec> pool;
        for (int i = 0;; ++i) {
            const std::string prefix = "pool." + std::to_string(i) + ".";
            auto it = values.find(prefix + "algorithm");
            if (it == values.end()) break;
            models::ModelSpec spec = models::default_spec(models::algorithm_from_string(it->second));
            for (auto& [key, value] : spec.hyperparameters) {
                auto kv = values.find(prefix + key);
                if (kv != values.end()) value = std::stod(kv->second);
            }
            models::validate(spec);
            pool.push_back(std::move(spec));
        }
        if (pool.empty()) throw std::invalid_argument("config: pool.0.algorithm present but unparseable");
        return pool;
    }

    std::vector<models::ModelSpec> pool;
    for (double trees : {8.0, 16.0, 32.0})
        for (double depth : {4.0, 8.0, 12.0}) {
            auto spec = model_default(models::Algorithm::RF);
            spec.hyperparameters["n_trees"] = trees;
            spec.hyperparameters["max_depth"] = depth;
            pool.push_back(std::move(spec));
        }
    for (double l2 : {0.0, 1e-4, 1e-3, 1e-2, 0.1}) {
        auto spec = model_default(models::Algorithm::LR);
        spec.hyperparameters["l2"] = l2;
        pool.push_back(std::move(spec));
    }
    for (double depth : {2.0, 4.0, 6.0, 8.0, 0.0}) {
        auto spec = model_default(models::Algorithm::DT);
        spec.hyperparameters["max_depth"] = depth;
        pool.push_back(std::move(spec));
    }
    return pool;
}

std::vector<models::ModelSpec> LabConfig::screen_pool() const {
    std::vector<models::ModelSpec> pool;
    for (auto a : {models::Algorithm::LR, models::Algorithm::GNB, models::Algorithm::DT,
                   models::Algorithm::RF, models::Algorithm::KNN})
        pool.push_back(model_default(a));
    return pool;
}

std::vector<models::ModelSpec> LabConfig::nscaling_pool() const {
    // Clean baseline first: a capped tree, genuinely weaker than the rest of
    // the pool on smooth data, so the peeking path keeps a diversity residual
    // at large n.
    std::vector<models::ModelSpec> pool;
    auto dt = model_default(models::Algorithm::DT);
    dt.hyperparameters["max_depth"] = 4;
    pool.push_back(std::move(dt));
    pool.push_back(model_default(models::Algorithm::LR));
    pool.push_back(model_default(models::Algorithm::GNB));
    auto rf = model_default(models::Algorithm::RF);
    rf.hyperparameters["n_trees"] = 16;
    pool.push_back(std::move(rf));
    pool.push_back(model_default(models::Algorithm::KNN));
    return pool;
}

models::SgdOptions LabConfig::sgd_options() const {
    models::SgdOptions opts;
    opts.learning_rate = num("sgd.learning_rate", 0.05);
    opts.l2 = num("sgd.l2", 1e-4);
    opts.epochs = static_cast<int>(num("sgd.epochs", 150));
    opts.batch = static_cast<int>(num("sgd.batch", 32));
    return opts;
}

LabConfig parse_config(const std::string& text) {
    LabConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: line " + std::to_string(line_no) + ": empty key or value");
        config.values[key] = value;
    }
    return config;
}

LabConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace leaklab::harness
