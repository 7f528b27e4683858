#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leaklab/matrix.hpp"

namespace leaklab::corpus {

enum class Split { discovery, confirmation };

std::string to_string(Split s);

// A binary-classification table. Rows are in canonical order: when a
// time_index is present rows are sorted by it (ties keep generation order).
struct Dataset {
    std::string id;
    Matrix features;                      // n x p
    std::vector<bool> categorical_mask;   // per column
    std::vector<int> labels;              // 0/1, length n
    std::optional<std::vector<int>> time_index; // non-decreasing when present
    std::optional<std::vector<int>> group_id;
    std::uint64_t content_hash = 0;

    std::size_t n() const { return features.rows(); }
    std::size_t p() const { return features.cols(); }
    int positives() const;
    bool has_categorical() const;
    std::vector<int> categorical_columns() const;
};

// Validates the Dataset invariants (n >= 4, p >= 1, both classes, sorted
// time_index, mask/label lengths) and throws std::invalid_argument on the
// first violation.
void validate(const Dataset& d);

// Digest of (id, shape, cell values, labels, special columns). All cells are
// hashed up to kFullHashCells; larger matrices are strided so the hash stays
// cheap on wide corpora.
std::uint64_t content_hash(const Dataset& d);

// Recomputes and stores the content hash; call after any mutation.
void rehash(Dataset& d);

// Deterministic discovery/confirmation allocation: FNV-1a(id) mod 2.
Split assign_split(const std::string& dataset_id);

struct SyntheticSpec {
    int n = 0;
    int p = 0;
    double class_sep = 0.0;   // distance between class means per informative axis
    double imbalance = 0.5;   // minority (positive) fraction, in (0, 0.5]
    int n_categorical = 0;    // first n_categorical columns become 4-level codes
    double drift = 0.0;       // per-unit-time drift rate, used by gen_temporal_drift
    int n_groups = 0;         // used by gen_grouped
    double group_offset = 0.0; // strength of the shared per-group feature offset
    std::uint64_t seed = 0;
};

void validate(const SyntheticSpec& spec);

} // namespace leaklab::corpus
