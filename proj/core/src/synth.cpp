#include "leaklab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "leaklab/rng.hpp"

namespace leaklab::corpus {

namespace {

std::vector<int> make_labels(const SyntheticSpec& spec, Rng& rng) {
    const int n_pos = static_cast<int>(std::llround(spec.imbalance * spec.n));
    std::vector<int> labels(static_cast<std::size_t>(spec.n), 0);
    std::fill(labels.begin(), labels.begin() + n_pos, 1);
    rng.shuffle(labels);
    return labels;
}

// Empirical quartile binning: replaces a latent Gaussian column with codes
// 0..3. Nearest-rank quartiles, half-open bins.
void quartile_bin_column(Matrix& X, std::size_t col) {
    const std::size_t n = X.rows();
    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = X(i, col);
    std::sort(sorted.begin(), sorted.end());
    const double q1 = sorted[n / 4];
    const double q2 = sorted[n / 2];
    const double q3 = sorted[(3 * n) / 4];
    for (std::size_t i = 0; i < n; ++i) {
        double v = X(i, col);
        X(i, col) = v < q1 ? 0.0 : v < q2 ? 1.0 : v < q3 ? 2.0 : 3.0;
    }
}

void bin_categoricals(Dataset& d, int n_categorical) {
    d.categorical_mask.assign(d.features.cols(), false);
    for (int j = 0; j < n_categorical; ++j) {
        quartile_bin_column(d.features, static_cast<std::size_t>(j));
        d.categorical_mask[static_cast<std::size_t>(j)] = true;
    }
}

} // namespace

Dataset gen_synthetic(const SyntheticSpec& spec) {
    validate(spec);
    Rng rng(derive_seed(spec.seed, "synth"));
    Dataset d;
    d.id = "synthetic";
    d.labels = make_labels(spec, rng);
    d.features = Matrix(static_cast<std::size_t>(spec.n), static_cast<std::size_t>(spec.p));
    const double half = spec.class_sep / 2.0;
    for (int i = 0; i < spec.n; ++i) {
        const double mean = d.labels[static_cast<std::size_t>(i)] == 1 ? half : -half;
        for (int j = 0; j < spec.p; ++j)
            d.features(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = mean + rng.normal();
    }
    bin_categoricals(d, spec.n_categorical);
    rehash(d);
    validate(d);
    return d;
}

Dataset gen_temporal_drift(const SyntheticSpec& spec) {
    validate(spec);
    if (spec.drift == 0.0) {
        // Stationary case: plain generation plus a deployment order.
        Dataset d = gen_synthetic(spec);
        d.id = "temporal";
        std::vector<int> t(static_cast<std::size_t>(spec.n));
        std::iota(t.begin(), t.end(), 0);
        d.time_index = std::move(t);
        rehash(d);
        validate(d);
        return d;
    }
    if (spec.p < 2)
        throw std::invalid_argument("gen_temporal_drift: drift > 0 requires p >= 2");

    Rng rng(derive_seed(spec.seed, "synth"));
    Dataset d;
    d.id = "temporal";
    d.labels = make_labels(spec, rng);
    d.features = Matrix(static_cast<std::size_t>(spec.n), static_cast<std::size_t>(spec.p));
    const double half = spec.class_sep / 2.0;
    for (int i = 0; i < spec.n; ++i) {
        const double sign = d.labels[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
        const double angle = spec.drift * static_cast<double>(i);
        const double c = std::cos(angle), s = std::sin(angle);
        for (int j = 0; j < spec.p; ++j) {
            double mean = 0.0;
            if (j + 1 < spec.p || spec.p % 2 == 0)
                mean = sign * half * ((j % 2 == 0) ? c : s);
            d.features(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = mean + rng.normal();
        }
    }
    bin_categoricals(d, spec.n_categorical);
    std::vector<int> t(static_cast<std::size_t>(spec.n));
    std::iota(t.begin(), t.end(), 0);
    d.time_index = std::move(t);
    rehash(d);
    validate(d);
    return d;
}

Dataset gen_grouped(const SyntheticSpec& spec) {
    validate(spec);
    const int g = spec.n_groups;
    if (g < 2 || g > spec.n / 2)
        throw std::invalid_argument("gen_grouped: n_groups must be in [2, n/2]");

    const int target_pos = static_cast<int>(std::llround(spec.imbalance * spec.n));
    int k_pos = std::clamp(static_cast<int>(std::llround(spec.imbalance * g)), 1, g - 1);
    while (k_pos > 1 && target_pos / k_pos < 2) --k_pos;
    while (k_pos < g - 1 && (spec.n - target_pos) / (g - k_pos) < 2) ++k_pos;
    if (target_pos / k_pos < 2 || (spec.n - target_pos) / (g - k_pos) < 2)
        throw std::invalid_argument("gen_grouped: cannot give every group >= 2 rows at this imbalance");

    auto sizes_for = [](int rows, int groups) {
        std::vector<int> sz(static_cast<std::size_t>(groups), rows / groups);
        for (int i = 0; i < rows % groups; ++i) ++sz[static_cast<std::size_t>(i)];
        return sz;
    };
    const auto pos_sizes = sizes_for(target_pos, k_pos);
    const auto neg_sizes = sizes_for(spec.n - target_pos, g - k_pos);

    Rng rng(derive_seed(spec.seed, "synth-group"));
    struct Row { int group; int label; };
    std::vector<Row> rows;
    rows.reserve(static_cast<std::size_t>(spec.n));
    int gid = 0;
    for (int s : pos_sizes) {
        for (int r = 0; r < s; ++r) rows.push_back({gid, 1});
        ++gid;
    }
    for (int s : neg_sizes) {
        for (int r = 0; r < s; ++r) rows.push_back({gid, 0});
        ++gid;
    }
    rng.shuffle(rows);

    // One latent offset vector per group, shared by all its rows.
    Matrix offsets(static_cast<std::size_t>(g), static_cast<std::size_t>(spec.p));
    for (int gi = 0; gi < g; ++gi)
        for (int j = 0; j < spec.p; ++j)
            offsets(static_cast<std::size_t>(gi), static_cast<std::size_t>(j)) = spec.group_offset * rng.normal();

    Dataset d;
    d.id = "grouped";
    d.features = Matrix(static_cast<std::size_t>(spec.n), static_cast<std::size_t>(spec.p));
    d.labels.resize(static_cast<std::size_t>(spec.n));
    std::vector<int> group_col(static_cast<std::size_t>(spec.n));
    const double half = spec.class_sep / 2.0;
    for (int i = 0; i < spec.n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        d.labels[static_cast<std::size_t>(i)] = row.label;
        group_col[static_cast<std::size_t>(i)] = row.group;
        const double mean = row.label == 1 ? half : -half;
        for (int j = 0; j < spec.p; ++j)
            d.features(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                mean + offsets(static_cast<std::size_t>(row.group), static_cast<std::size_t>(j)) + rng.normal();
    }
    bin_categoricals(d, spec.n_categorical);
    d.group_id = std::move(group_col);
    rehash(d);
    validate(d);
    return d;
}

} // namespace leaklab::corpus
