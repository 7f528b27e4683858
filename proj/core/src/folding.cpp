#include "leaklab/folding.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "leaklab/hash.hpp"
#include "leaklab/rng.hpp"

namespace leaklab::folding {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::stratified: return "stratified";
        case Strategy::walk_forward: return "walk_forward";
        case Strategy::size_matched_random: return "size_matched_random";
        case Strategy::group: return "group";
    }
    return "?";
}

std::uint64_t plan_hash(const FoldPlan& plan) {
    Fnv1a h;
    h.str(to_string(plan.strategy)).i64(plan.k).u64(plan.seed);
    for (const auto& f : plan.folds) {
        h.str("train");
        for (int i : f.train) h.i64(i);
        h.str("test");
        for (int i : f.test) h.i64(i);
    }
    return h.digest();
}

FoldPlan stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
    const int n = static_cast<int>(labels.size());
    std::vector<int> pos, neg;
    for (int i = 0; i < n; ++i) (labels[static_cast<std::size_t>(i)] == 1 ? pos : neg).push_back(i);
    if (static_cast<int>(pos.size()) < k || static_cast<int>(neg.size()) < k)
        throw std::invalid_argument("stratified_kfold: every class needs at least k members");

    Rng rng(derive_seed(seed, "stratified"));
    rng.shuffle(pos);
    rng.shuffle(neg);

    std::vector<std::vector<int>> test_sets(static_cast<std::size_t>(k));
    auto deal = [&](const std::vector<int>& cls) {
        const int base = static_cast<int>(cls.size()) / k;
        const int rem = static_cast<int>(cls.size()) % k;
        std::size_t at = 0;
        for (int f = 0; f < k; ++f) {
            const int take = base + (f < rem ? 1 : 0);
            for (int t = 0; t < take; ++t) test_sets[static_cast<std::size_t>(f)].push_back(cls[at++]);
        }
    };
    deal(pos);
    deal(neg);

    FoldPlan plan;
    plan.strategy = Strategy::stratified;
    plan.k = k;
    plan.seed = seed;
    for (int f = 0; f < k; ++f) {
        Fold fold;
        fold.test = test_sets[static_cast<std::size_t>(f)];
        std::sort(fold.test.begin(), fold.test.end());
        std::vector<bool> in_test(static_cast<std::size_t>(n), false);
        for (int i : fold.test) in_test[static_cast<std::size_t>(i)] = true;
        for (int i = 0; i < n; ++i)
            if (!in_test[static_cast<std::size_t>(i)]) fold.train.push_back(i);
        plan.folds.push_back(std::move(fold));
    }
    plan.plan_hash = plan_hash(plan);
    return plan;
}

FoldPlan walk_forward(std::span<const int> time_index, int k) {
    if (time_index.empty()) throw std::invalid_argument("walk_forward: time_index required");
    if (k < 1) throw std::invalid_argument("walk_forward: k must be >= 1");
    const int n = static_cast<int>(time_index.size());
    if (n < k + 1) throw std::invalid_argument("walk_forward: need n >= k + 1");
    if (!std::is_sorted(time_index.begin(), time_index.end()))
        throw std::invalid_argument("walk_forward: time_index must be non-decreasing");

    const int blocks = k + 1;
    const int base = n / blocks;
    const int rem = n % blocks;
    std::vector<std::pair<int, int>> spans; // [begin, end)
    int at = 0;
    for (int b = 0; b < blocks; ++b) {
        const int len = base + (b < rem ? 1 : 0);
        spans.emplace_back(at, at + len);
        at += len;
    }

    FoldPlan plan;
    plan.strategy = Strategy::walk_forward;
    plan.k = k;
    plan.seed = 0;
    for (int i = 0; i < k; ++i) {
        Fold fold;
        for (int r = 0; r < spans[static_cast<std::size_t>(i)].second; ++r) fold.train.push_back(r);
        for (int r = spans[static_cast<std::size_t>(i + 1)].first; r < spans[static_cast<std::size_t>(i + 1)].second; ++r)
            fold.test.push_back(r);
        plan.folds.push_back(std::move(fold));
    }
    plan.plan_hash = plan_hash(plan);
    return plan;
}

FoldPlan size_matched_random(const FoldPlan& walk_plan, std::uint64_t seed) {
    if (walk_plan.strategy != Strategy::walk_forward)
        throw std::invalid_argument("size_matched_random: input plan must be walk_forward");
    int n = 0;
    for (const auto& f : walk_plan.folds)
        n = std::max(n, std::max(f.train.empty() ? 0 : f.train.back() + 1,
                                 f.test.empty() ? 0 : f.test.back() + 1));

    FoldPlan plan;
    plan.strategy = Strategy::size_matched_random;
    plan.k = walk_plan.k;
    plan.seed = seed;
    for (std::size_t fi = 0; fi < walk_plan.folds.size(); ++fi) {
        Rng rng(derive_seed(seed, "size_matched", fi));
        auto perm = identity_indices(static_cast<std::size_t>(n));
        rng.shuffle(perm);
        const auto& ref = walk_plan.folds[fi];
        Fold fold;
        fold.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(ref.train.size()));
        fold.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(ref.train.size()),
                         perm.begin() + static_cast<std::ptrdiff_t>(ref.train.size() + ref.test.size()));
        std::sort(fold.train.begin(), fold.train.end());
        std::sort(fold.test.begin(), fold.test.end());
        plan.folds.push_back(std::move(fold));
    }
    plan.plan_hash = plan_hash(plan);
    return plan;
}

FoldPlan group_kfold(std::span<const int> group_id, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("group_kfold: k must be >= 2");
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < group_id.size(); ++i) groups[group_id[i]].push_back(static_cast<int>(i));
    if (static_cast<int>(groups.size()) < k)
        throw std::invalid_argument("group_kfold: need at least k distinct groups");

    struct G { int id; std::vector<int> rows; };
    std::vector<G> order;
    order.reserve(groups.size());
    for (auto& [gid, rows] : groups) order.push_back({gid, std::move(rows)});
    Rng rng(derive_seed(seed, "group"));
    rng.shuffle(order);
    // Largest group onto the lightest fold; the pre-shuffle breaks size ties.
    std::stable_sort(order.begin(), order.end(),
                     [](const G& a, const G& b) { return a.rows.size() > b.rows.size(); });

    const int n = static_cast<int>(group_id.size());
    std::vector<std::vector<int>> test_sets(static_cast<std::size_t>(k));
    std::vector<int> load(static_cast<std::size_t>(k), 0);
    for (const auto& g : order) {
        int best = 0;
        for (int f = 1; f < k; ++f)
            if (load[static_cast<std::size_t>(f)] < load[static_cast<std::size_t>(best)]) best = f;
        for (int r : g.rows) test_sets[static_cast<std::size_t>(best)].push_back(r);
        load[static_cast<std::size_t>(best)] += static_cast<int>(g.rows.size());
    }

    FoldPlan plan;
    plan.strategy = Strategy::group;
    plan.k = k;
    plan.seed = seed;
    for (int f = 0; f < k; ++f) {
        Fold fold;
        fold.test = test_sets[static_cast<std::size_t>(f)];
        std::sort(fold.test.begin(), fold.test.end());
        std::vector<bool> in_test(static_cast<std::size_t>(n), false);
        for (int i : fold.test) in_test[static_cast<std::size_t>(i)] = true;
        for (int i = 0; i < n; ++i)
            if (!in_test[static_cast<std::size_t>(i)]) fold.train.push_back(i);
        plan.folds.push_back(std::move(fold));
    }
    plan.plan_hash = plan_hash(plan);
    return plan;
}

std::vector<int> stratified_subsample(const corpus::Dataset& d, int m, std::uint64_t seed) {
    const int n = static_cast<int>(d.n());
    if (m > n) throw std::invalid_argument("stratified_subsample: m must be <= n");
    std::vector<int> pos, neg;
    for (int i = 0; i < n; ++i) (d.labels[static_cast<std::size_t>(i)] == 1 ? pos : neg).push_back(i);
    const double frac_pos = static_cast<double>(pos.size()) / n;
    const int m_pos = static_cast<int>(std::llround(frac_pos * m));
    const int m_neg = m - m_pos;
    if (m_pos < 1 || m_neg < 1)
        throw std::invalid_argument("stratified_subsample: m too small to hold both classes");

    Rng rng_pos(derive_seed(seed, "subsample_pos"));
    Rng rng_neg(derive_seed(seed, "subsample_neg"));
    rng_pos.shuffle(pos);
    rng_neg.shuffle(neg);
    // Prefix-take per class gives the nesting property across m.
    std::vector<int> out(pos.begin(), pos.begin() + m_pos);
    out.insert(out.end(), neg.begin(), neg.begin() + m_neg);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace leaklab::folding
