#include "leaklab/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace leaklab::corpus {

namespace {

std::vector<std::string> parse_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (ch == '\r') {
            // tolerate CRLF line endings
        } else {
            cur += ch;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

std::optional<int> map_label(const std::string& raw) {
    if (raw == "0" || raw == "neg") return 0;
    if (raw == "1" || raw == "pos") return 1;
    double v;
    if (parse_double(raw, v)) {
        if (v == 0.0) return 0;
        if (v == 1.0) return 1;
    }
    return std::nullopt;
}

} // namespace

Dataset load_csv(const std::string& path, const CsvOptions& opts) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_csv: cannot open " + path);

    std::string header_line;
    if (!std::getline(in, header_line) || header_line.empty())
        throw std::invalid_argument("load_csv: empty file " + path);
    const auto header = parse_record(header_line);

    auto find_col = [&](const std::string& name) -> int {
        auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : static_cast<int>(it - header.begin());
    };
    const int label_col = find_col(opts.label_column);
    if (label_col < 0)
        throw std::invalid_argument("load_csv: missing label column '" + opts.label_column + "'");
    const int time_col = opts.time_column ? find_col(*opts.time_column) : -1;
    if (opts.time_column && time_col < 0)
        throw std::invalid_argument("load_csv: missing time column '" + *opts.time_column + "'");
    const int group_col = opts.group_column ? find_col(*opts.group_column) : -1;
    if (opts.group_column && group_col < 0)
        throw std::invalid_argument("load_csv: missing group column '" + *opts.group_column + "'");

    std::vector<int> feature_cols;
    for (int j = 0; j < static_cast<int>(header.size()); ++j)
        if (j != label_col && j != time_col && j != group_col) feature_cols.push_back(j);
    if (feature_cols.empty()) throw std::invalid_argument("load_csv: no feature columns");

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto fields = parse_record(line);
        if (fields.size() != header.size())
            throw std::invalid_argument("load_csv: row with " + std::to_string(fields.size()) +
                                        " fields, expected " + std::to_string(header.size()));
        rows.push_back(std::move(fields));
    }

    std::vector<int> labels;
    std::vector<std::size_t> kept;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto lab = map_label(rows[r][static_cast<std::size_t>(label_col)]);
        if (!lab) continue; // unparseable label: reject the row
        labels.push_back(*lab);
        kept.push_back(r);
    }
    if (kept.empty()) throw std::invalid_argument("load_csv: no rows with parseable labels");

    const std::size_t n = kept.size();
    const std::size_t p = feature_cols.size();

    // First pass decides which feature columns are numeric.
    std::vector<bool> numeric(p, true);
    std::size_t missing_numeric = 0;
    for (std::size_t jj = 0; jj < p; ++jj) {
        const auto col = static_cast<std::size_t>(feature_cols[jj]);
        for (std::size_t r : kept) {
            double v;
            const auto& cell = rows[r][col];
            if (cell.empty()) continue; // decided below
            if (!parse_double(cell, v)) {
                numeric[jj] = false;
                break;
            }
        }
        if (numeric[jj]) {
            for (std::size_t r : kept)
                if (rows[r][col].empty()) ++missing_numeric;
        }
    }
    if (missing_numeric > 0)
        throw std::invalid_argument("load_csv: " + std::to_string(missing_numeric) +
                                    " missing numeric cell(s); imputation is out of scope");

    // save_csv dialect: a header of the form c<digits> marks an
    // integer-coded categorical column even though its cells parse as numbers
    auto coded_categorical = [&](std::size_t jj) {
        const auto& name = header[static_cast<std::size_t>(feature_cols[jj])];
        if (name.size() < 2 || name[0] != 'c') return false;
        return std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; });
    };

    Dataset d;
    d.id = std::filesystem::path(path).stem().string();
    d.features = Matrix(n, p);
    d.categorical_mask.assign(p, false);
    for (std::size_t jj = 0; jj < p; ++jj) {
        const auto col = static_cast<std::size_t>(feature_cols[jj]);
        if (coded_categorical(jj)) d.categorical_mask[jj] = true;
        if (numeric[jj]) {
            for (std::size_t i = 0; i < n; ++i) {
                double v;
                parse_double(rows[kept[i]][col], v);
                d.features(i, jj) = v;
            }
        } else {
            d.categorical_mask[jj] = true;
            // first-appearance order
            std::map<std::string, int> codes;
            int next_code = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const auto& cell = rows[kept[i]][col];
                auto [it, inserted] = codes.try_emplace(cell, next_code);
                if (inserted) ++next_code;
                d.features(i, jj) = static_cast<double>(it->second);
            }
        }
    }
    d.labels = std::move(labels);

    auto int_column = [&](int col, const char* what) {
        std::vector<int> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            double v;
            if (!parse_double(rows[kept[i]][static_cast<std::size_t>(col)], v))
                throw std::invalid_argument(std::string("load_csv: non-numeric ") + what + " cell");
            out[i] = static_cast<int>(std::llround(v));
        }
        return out;
    };
    if (time_col >= 0) {
        auto t = int_column(time_col, "time");
        // canonical row ordering: stable sort by time
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });
        Matrix sorted(n, p);
        std::vector<int> slab(n), st(n);
        std::optional<std::vector<int>> sg;
        std::vector<int> g;
        if (group_col >= 0) g = int_column(group_col, "group");
        if (group_col >= 0) sg = std::vector<int>(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < p; ++j) sorted(i, j) = d.features(order[i], j);
            slab[i] = d.labels[order[i]];
            st[i] = t[order[i]];
            if (sg) (*sg)[i] = g[order[i]];
        }
        d.features = std::move(sorted);
        d.labels = std::move(slab);
        d.time_index = std::move(st);
        d.group_id = std::move(sg);
    } else if (group_col >= 0) {
        d.group_id = int_column(group_col, "group");
    }

    rehash(d);
    validate(d); // throws on single-class labels etc.
    return d;
}

void save_csv(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_csv: cannot open " + path + " for writing");
    const std::size_t n = d.n(), p = d.p();
    for (std::size_t j = 0; j < p; ++j)
        out << (d.categorical_mask[j] ? "c" : "f") << j << ",";
    out << "label";
    if (d.time_index) out << ",time_index";
    if (d.group_id) out << ",group_id";
    out << "\n";
    char buf[40];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", d.features(i, j));
            out << buf << ",";
        }
        out << d.labels[i];
        if (d.time_index) out << "," << (*d.time_index)[i];
        if (d.group_id) out << "," << (*d.group_id)[i];
        out << "\n";
    }
}

} // namespace leaklab::corpus
