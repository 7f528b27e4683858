#include "leaklab/dataset.hpp"

#include <algorithm>
#include <stdexcept>

#include "leaklab/hash.hpp"

namespace leaklab::corpus {

namespace {
constexpr std::size_t kFullHashCells = 1u << 20;
}

std::string to_string(Split s) {
    return s == Split::discovery ? "discovery" : "confirmation";
}

int Dataset::positives() const {
    int c = 0;
    for (int y : labels) c += (y == 1);
    return c;
}

bool Dataset::has_categorical() const {
    return std::find(categorical_mask.begin(), categorical_mask.end(), true) != categorical_mask.end();
}

std::vector<int> Dataset::categorical_columns() const {
    std::vector<int> cols;
    for (std::size_t j = 0; j < categorical_mask.size(); ++j)
        if (categorical_mask[j]) cols.push_back(static_cast<int>(j));
    return cols;
}

void validate(const Dataset& d) {
    const std::size_t n = d.features.rows();
    const std::size_t p = d.features.cols();
    if (d.id.empty()) throw std::invalid_argument("dataset: empty id");
    if (n < 4) throw std::invalid_argument("dataset: n must be >= 4");
    if (p < 1) throw std::invalid_argument("dataset: p must be >= 1");
    if (d.labels.size() != n) throw std::invalid_argument("dataset: labels length != n");
    if (d.categorical_mask.size() != p) throw std::invalid_argument("dataset: categorical_mask length != p");
    int pos = 0;
    for (int y : d.labels) {
        if (y != 0 && y != 1) throw std::invalid_argument("dataset: labels must be 0/1");
        pos += y;
    }
    if (pos == 0 || pos == static_cast<int>(n))
        throw std::invalid_argument("dataset: labels must contain both classes");
    if (d.time_index) {
        if (d.time_index->size() != n) throw std::invalid_argument("dataset: time_index length != n");
        if (!std::is_sorted(d.time_index->begin(), d.time_index->end()))
            throw std::invalid_argument("dataset: time_index must be non-decreasing in canonical row order");
    }
    if (d.group_id && d.group_id->size() != n)
        throw std::invalid_argument("dataset: group_id length != n");
}

std::uint64_t content_hash(const Dataset& d) {
    Fnv1a h;
    h.str(d.id);
    h.u64(d.features.rows()).u64(d.features.cols());
    const auto& cells = d.features.data();
    std::size_t stride = cells.size() <= kFullHashCells ? 1 : cells.size() / kFullHashCells;
    for (std::size_t i = 0; i < cells.size(); i += stride) h.f64(cells[i]);
    for (int y : d.labels) h.i64(y);
    for (bool c : d.categorical_mask) h.u64(c ? 1 : 0);
    if (d.time_index) {
        h.str("time");
        for (int t : *d.time_index) h.i64(t);
    }
    if (d.group_id) {
        h.str("group");
        for (int g : *d.group_id) h.i64(g);
    }
    return h.digest();
}

void rehash(Dataset& d) { d.content_hash = content_hash(d); }

Split assign_split(const std::string& dataset_id) {
    if (dataset_id.empty()) throw std::invalid_argument("assign_split: empty dataset id");
    return (fnv1a(dataset_id) % 2 == 0) ? Split::discovery : Split::confirmation;
}

void validate(const SyntheticSpec& spec) {
    if (spec.n < 4) throw std::invalid_argument("synthetic spec: n must be >= 4");
    if (spec.p < 1) throw std::invalid_argument("synthetic spec: p must be >= 1");
    if (spec.class_sep < 0) throw std::invalid_argument("synthetic spec: class_sep must be >= 0");
    if (!(spec.imbalance > 0.0 && spec.imbalance <= 0.5))
        throw std::invalid_argument("synthetic spec: imbalance must be in (0, 0.5]");
    if (spec.imbalance * spec.n < 2.0)
        throw std::invalid_argument("synthetic spec: imbalance * n must be >= 2");
    if (spec.n_categorical < 0 || spec.n_categorical > spec.p)
        throw std::invalid_argument("synthetic spec: n_categorical must be in [0, p]");
    if (spec.drift < 0) throw std::invalid_argument("synthetic spec: drift must be >= 0");
    if (spec.n_groups < 0) throw std::invalid_argument("synthetic spec: n_groups must be >= 0");
    if (spec.group_offset < 0) throw std::invalid_argument("synthetic spec: group_offset must be >= 0");
}

} // namespace leaklab::corpus
