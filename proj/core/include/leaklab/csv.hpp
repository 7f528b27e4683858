#pragma once

#include <optional>
#include <string>

#include "leaklab/dataset.hpp"

namespace leaklab::corpus {

struct CsvOptions {
    std::string label_column = "label";
    std::optional<std::string> time_column;
    std::optional<std::string> group_column;
};

// RFC-4180-style reader (quoted fields, doubled quotes, CRLF tolerated),
// header row required. Label values may be 0/1 or "neg"/"pos". Non-numeric
// columns other than the label/time/group columns become categorical integer
// codes in first-appearance order. Rows whose label cannot be mapped are
// rejected; files with missing numeric cells are rejected with a cell count
// in the error message. The dataset id is derived from the file stem.
Dataset load_csv(const std::string& path, const CsvOptions& opts = {});

// Writes a dataset in the same dialect load_csv reads: feature columns first
// (f<i> numeric, c<i> categorical), then label and any special columns.
void save_csv(const Dataset& d, const std::string& path);

} // namespace leaklab::corpus
