#include <algorithm>
#include <cmath>

#include "leaklab/models_detail.hpp"
#include "leaklab/rng.hpp"
#include "leaklab/tree_detail.hpp"

namespace leaklab::models::detail {

namespace {

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double weighted_gini = 0.0;
};

// Weighted Gini of a boundary with `lp` positives in `ln` left rows out of
// (m, pos) total.
double weighted_gini(int ln, int lp, int m, int pos) {
    const int rn = m - ln;
    const int rp = pos - lp;
    const double gl = ln > 0 ? 2.0 * lp * (ln - lp) / (static_cast<double>(ln) * ln) : 0.0;
    const double gr = rn > 0 ? 2.0 * rp * (rn - rp) / (static_cast<double>(rn) * rn) : 0.0;
    return (ln * gl + rn * gr) / static_cast<double>(m);
}

} // namespace

int TreeBuilder::build_node(std::vector<int>& rows, int depth) {
    const int idx = static_cast<int>(nodes_->size());
    nodes_->push_back({});

    const int m = static_cast<int>(rows.size());
    int pos = 0;
    for (int r : rows) pos += y_[static_cast<std::size_t>(r)];
    const double value = static_cast<double>(pos) / m;

    const bool depth_hit = opts_.max_depth > 0 && depth >= opts_.max_depth;
    if (pos == 0 || pos == m || m < 2 * opts_.min_leaf || depth_hit) {
        (*nodes_)[static_cast<std::size_t>(idx)].value = value;
        return idx;
    }

    // Feature candidates: all, or an mtry-subset sampled then sorted so the
    // lowest-index tie-break stays well defined.
    const int p = static_cast<int>(X_->cols());
    std::vector<int> feats;
    if (opts_.mtry <= 0 || opts_.mtry >= p) {
        feats = identity_indices(static_cast<std::size_t>(p));
    } else {
        scratch_feats_.resize(static_cast<std::size_t>(p));
        for (int j = 0; j < p; ++j) scratch_feats_[static_cast<std::size_t>(j)] = j;
        for (int i = 0; i < opts_.mtry; ++i) {
            const auto j = static_cast<std::size_t>(i) +
                           static_cast<std::size_t>(opts_.rng->uniform_index(static_cast<std::uint64_t>(p - i)));
            std::swap(scratch_feats_[static_cast<std::size_t>(i)], scratch_feats_[j]);
        }
        feats.assign(scratch_feats_.begin(), scratch_feats_.begin() + opts_.mtry);
        std::sort(feats.begin(), feats.end());
    }

    SplitChoice best;
    std::vector<std::pair<double, int>>& vals = scratch_vals_;
    for (int f : feats) {
        vals.clear();
        vals.reserve(static_cast<std::size_t>(m));
        for (int r : rows)
            vals.emplace_back((*X_)(static_cast<std::size_t>(r), static_cast<std::size_t>(f)),
                              y_[static_cast<std::size_t>(r)]);
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        int left_pos = 0;
        for (int i = 1; i < m; ++i) {
            left_pos += vals[static_cast<std::size_t>(i - 1)].second;
            const double lo = vals[static_cast<std::size_t>(i - 1)].first;
            const double hi = vals[static_cast<std::size_t>(i)].first;
            if (lo == hi) continue;
            if (i < opts_.min_leaf || m - i < opts_.min_leaf) continue;
            const double g = weighted_gini(i, left_pos, m, pos);
            if (!best.found || g < best.weighted_gini) {
                double mid = lo + (hi - lo) / 2.0;
                if (!(mid > lo)) mid = hi; // adjacent doubles: keep the split non-empty
                best = {true, f, mid, g};
            }
        }
    }

    if (!best.found) {
        (*nodes_)[static_cast<std::size_t>(idx)].value = value;
        return idx;
    }

    std::vector<int> left_rows, right_rows;
    left_rows.reserve(static_cast<std::size_t>(m));
    right_rows.reserve(static_cast<std::size_t>(m));
    for (int r : rows)
        ((*X_)(static_cast<std::size_t>(r), static_cast<std::size_t>(best.feature)) < best.threshold
             ? left_rows
             : right_rows)
            .push_back(r);

    (*nodes_)[static_cast<std::size_t>(idx)].feature = best.feature;
    (*nodes_)[static_cast<std::size_t>(idx)].threshold = best.threshold;
    (*nodes_)[static_cast<std::size_t>(idx)].value = value;
    const int l = build_node(left_rows, depth + 1);
    (*nodes_)[static_cast<std::size_t>(idx)].left = l;
    const int r = build_node(right_rows, depth + 1);
    (*nodes_)[static_cast<std::size_t>(idx)].right = r;
    return idx;
}

Tree build_tree(const Matrix& X, std::span<const int> y, std::vector<int> rows, const TreeOptions& opts) {
    Tree tree;
    tree.p = X.cols();
    TreeBuilder builder(X, y, opts, tree.nodes);
    builder.build_node(rows, 0);
    return tree;
}

double Tree::predict_row(std::span<const double> row) const {
    int at = 0;
    while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
        const auto& nd = nodes[static_cast<std::size_t>(at)];
        at = row[static_cast<std::size_t>(nd.feature)] < nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(at)].value;
}

namespace {

class TreeModel final : public Model {
public:
    explicit TreeModel(Tree tree) : tree_(std::move(tree)) {}
    std::vector<double> score(const Matrix& X) const override {
        std::vector<double> out(X.rows());
        for (std::size_t i = 0; i < X.rows(); ++i) out[i] = tree_.predict_row(X.row(i));
        return out;
    }
    std::size_t n_features() const override { return tree_.p; }

private:
    Tree tree_;
};

} // namespace

std::shared_ptr<const Model> fit_tree(const ModelSpec& spec, const Matrix& X, std::span<const int> y) {
    TreeOptions opts;
    opts.max_depth = static_cast<int>(spec.get("max_depth", 0));
    opts.min_leaf = static_cast<int>(spec.get("min_leaf", 1));
    opts.mtry = 0;
    opts.rng = nullptr;
    return std::make_shared<TreeModel>(build_tree(X, y, identity_indices(X.rows()), opts));
}

} // namespace leaklab::models::detail
