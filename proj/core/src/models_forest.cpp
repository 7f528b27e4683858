#include <cmath>

#include "leaklab/models_detail.hpp"
#include "leaklab/rng.hpp"
#include "leaklab/tree_detail.hpp"

namespace leaklab::models::detail {

namespace {

class ForestModel final : public Model {
public:
    ForestModel(std::vector<Tree> trees, std::size_t p) : trees_(std::move(trees)), p_(p) {}

    std::vector<double> score(const Matrix& X) const override {
        std::vector<double> out(X.rows(), 0.0);
        for (const auto& tree : trees_)
            for (std::size_t i = 0; i < X.rows(); ++i) out[i] += tree.predict_row(X.row(i));
        const double inv = 1.0 / static_cast<double>(trees_.size());
        for (double& v : out) v *= inv;
        return out;
    }
    std::size_t n_features() const override { return p_; }

private:
    std::vector<Tree> trees_;
    std::size_t p_;
};

} // namespace

std::shared_ptr<const Model> fit_forest(const ModelSpec& spec, const Matrix& X, std::span<const int> y) {
    const int n_trees = static_cast<int>(spec.get("n_trees", 20));
    const double fraction = spec.get("bootstrap_fraction", 1.0);
    const std::size_t n = X.rows();
    const auto sample_size = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(fraction * static_cast<double>(n))));
    const int mtry = std::max(1, static_cast<int>(std::llround(std::sqrt(static_cast<double>(X.cols())))));

    TreeOptions opts;
    opts.max_depth = static_cast<int>(spec.get("max_depth", 10));
    opts.min_leaf = static_cast<int>(spec.get("min_leaf", 1));
    opts.mtry = mtry;

    std::vector<Tree> trees;
    trees.reserve(static_cast<std::size_t>(n_trees));
    for (int t = 0; t < n_trees; ++t) {
        Rng rng(derive_seed(spec.seed, "tree", static_cast<std::uint64_t>(t)));
        std::vector<int> rows(sample_size);
        for (auto& r : rows) r = static_cast<int>(rng.uniform_index(n));
        opts.rng = &rng;
        trees.push_back(build_tree(X, y, std::move(rows), opts));
    }
    return std::make_shared<ForestModel>(std::move(trees), X.cols());
}

} // namespace leaklab::models::detail
