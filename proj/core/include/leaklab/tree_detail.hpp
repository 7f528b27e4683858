#pragma once

// CART internals shared by the single decision tree and the forest.
// Splits are midpoints between adjacent distinct values, impurity is Gini,
// and ties resolve to the lowest feature index then lowest threshold, so a
// rebuilt tree is always identical.

#include <span>
#include <vector>

#include "leaklab/matrix.hpp"

namespace leaklab {
class Rng;
}

namespace leaklab::models::detail {

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0; // positive fraction at this node
};

struct Tree {
    std::vector<TreeNode> nodes;
    std::size_t p = 0;
    double predict_row(std::span<const double> row) const;
};

struct TreeOptions {
    int max_depth = 0; // 0 = unlimited
    int min_leaf = 1;
    int mtry = 0;      // 0 = consider every feature
    Rng* rng = nullptr; // required when mtry > 0
};

class TreeBuilder {
public:
    TreeBuilder(const Matrix& X, std::span<const int> y, const TreeOptions& opts,
                std::vector<TreeNode>& nodes)
        : X_(&X), y_(y), opts_(opts), nodes_(&nodes) {}

    int build_node(std::vector<int>& rows, int depth);

private:
    const Matrix* X_;
    std::span<const int> y_;
    TreeOptions opts_;
    std::vector<TreeNode>* nodes_;
    std::vector<int> scratch_feats_;
    std::vector<std::pair<double, int>> scratch_vals_;
};

Tree build_tree(const Matrix& X, std::span<const int> y, std::vector<int> rows, const TreeOptions& opts);

} // namespace leaklab::models::detail
