#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "leaklab/dataset.hpp"

namespace leaklab::folding {

enum class Strategy { stratified, walk_forward, size_matched_random, group };

std::string to_string(Strategy s);

struct Fold {
    std::vector<int> train;
    std::vector<int> test;
};

struct FoldPlan {
    std::vector<Fold> folds;
    Strategy strategy = Strategy::stratified;
    int k = 0;
    std::uint64_t seed = 0;
    std::uint64_t plan_hash = 0;
};

// Digest over strategy, k, seed and the full index content.
std::uint64_t plan_hash(const FoldPlan& plan);

// Seeded stratified k-fold: per-fold class counts within +/-1 of
// proportional; test sets partition all rows. Requires every class to have
// at least k members.
FoldPlan stratified_kfold(std::span<const int> labels, int k, std::uint64_t seed);

// Expanding-window temporal folds over rows already in canonical time order:
// rows split into k+1 contiguous blocks (the first n mod (k+1) blocks get one
// extra row); fold i trains on blocks 0..i and tests on block i+1.
FoldPlan walk_forward(std::span<const int> time_index, int k);

// Random control with the walk-forward fold sizes: fold i keeps the same
// train/test sizes but draws membership from a seeded permutation of all
// rows (one permutation per fold).
FoldPlan size_matched_random(const FoldPlan& walk_plan, std::uint64_t seed);

// Group k-fold: whole groups are assigned to test folds (largest group
// first onto the lightest fold), so no group ever spans train and test.
FoldPlan group_kfold(std::span<const int> group_id, int k, std::uint64_t seed);

// Stratified subsample of m rows, class ratio preserved within +/-1 row,
// returned sorted ascending. Nested: for a fixed seed and the same labels,
// the m1-subsample is a subset of the m2-subsample whenever m1 <= m2.
std::vector<int> stratified_subsample(const corpus::Dataset& d, int m, std::uint64_t seed);

} // namespace leaklab::folding
