#include "leaklab/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace leaklab::inject {

std::string to_string(TransformKind k) {
    switch (k) {
        case TransformKind::zscale: return "zscale";
        case TransformKind::minmax: return "minmax";
        case TransformKind::ordinal_encode: return "ordinal_encode";
        case TransformKind::equal_width_bins: return "equal_width_bins";
        case TransformKind::outlier_trim: return "outlier_trim";
        case TransformKind::pca: return "pca";
        case TransformKind::chained: return "chained";
    }
    return "?";
}

TransformKind transform_from_string(const std::string& s) {
    if (s == "zscale") return TransformKind::zscale;
    if (s == "minmax") return TransformKind::minmax;
    if (s == "ordinal_encode") return TransformKind::ordinal_encode;
    if (s == "equal_width_bins") return TransformKind::equal_width_bins;
    if (s == "outlier_trim") return TransformKind::outlier_trim;
    if (s == "pca") return TransformKind::pca;
    if (s == "chained") return TransformKind::chained;
    throw std::invalid_argument("unknown transform kind: " + s);
}

namespace {

class ZScale final : public FittedTransform {
public:
    ZScale(const Matrix& X, std::span<const int> fit_rows) {
        const std::size_t p = X.cols();
        mean_.assign(p, 0.0);
        scale_.assign(p, 0.0);
        for (int r : fit_rows) {
            auto row = X.row(static_cast<std::size_t>(r));
            for (std::size_t j = 0; j < p; ++j) mean_[j] += row[j];
        }
        const double inv_m = 1.0 / static_cast<double>(fit_rows.size());
        for (std::size_t j = 0; j < p; ++j) mean_[j] *= inv_m;
        std::vector<double> var(p, 0.0);
        for (int r : fit_rows) {
            auto row = X.row(static_cast<std::size_t>(r));
            for (std::size_t j = 0; j < p; ++j) {
                const double d = row[j] - mean_[j];
                var[j] += d * d;
            }
        }
        for (std::size_t j = 0; j < p; ++j) {
            const double sd = std::sqrt(var[j] * inv_m);
            scale_[j] = sd < 1e-12 ? 0.0 : 1.0 / sd; // constant column: zeroed in both arms
        }
    }

    Matrix apply(const Matrix& X) const override {
        Matrix out(X.rows(), X.cols());
        for (std::size_t i = 0; i < X.rows(); ++i)
            for (std::size_t j = 0; j < X.cols(); ++j)
                out(i, j) = (X(i, j) - mean_[j]) * scale_[j];
        return out;
    }
    std::size_t out_cols() const override { return mean_.size(); }

private:
    std::vector<double> mean_, scale_;
};

class MinMax final : public FittedTransform {
public:
    MinMax(const Matrix& X, std::span<const int> fit_rows) {
        const std::size_t p = X.cols();
        lo_.assign(p, std::numeric_limits<double>::infinity());
        inv_range_.assign(p, 0.0);
        std::vector<double> hi(p, -std::numeric_limits<double>::infinity());
        for (int r : fit_rows) {
            auto row = X.row(static_cast<std::size_t>(r));
            for (std::size_t j = 0; j < p; ++j) {
                lo_[j] = std::min(lo_[j], row[j]);
                hi[j] = std::max(hi[j], row[j]);
            }
        }
        for (std::size_t j = 0; j < p; ++j) {
            const double range = hi[j] - lo_[j];
            inv_range_[j] = range < 1e-12 ? 0.0 : 1.0 / range;
        }
    }

    Matrix apply(const Matrix& X) const override {
        Matrix out(X.rows(), X.cols());
        for (std::size_t i = 0; i < X.rows(); ++i)
            for (std::size_t j = 0; j < X.cols(); ++j)
                out(i, j) = (X(i, j) - lo_[j]) * inv_range_[j];
        return out;
    }
    std::size_t out_cols() const override { return lo_.size(); }

private:
    std::vector<double> lo_, inv_range_;
};

class OrdinalEncode final : public FittedTransform {
public:
    OrdinalEncode(const Matrix& X, std::span<const int> fit_rows, const std::vector<bool>& mask) {
        p_ = X.cols();
        codes_.resize(p_);
        categorical_.assign(mask.begin(), mask.end());
        bool any = false;
        for (std::size_t j = 0; j < p_; ++j) {
            if (!categorical_[j]) continue;
            any = true;
            auto& code_map = codes_[j];
            int next = 0;
            for (int r : fit_rows) {
                const double v = X(static_cast<std::size_t>(r), j);
                if (code_map.try_emplace(v, next).second) ++next;
            }
        }
        if (!any) throw std::invalid_argument("ordinal_encode: dataset has no categorical columns");
    }

    Matrix apply(const Matrix& X) const override {
        Matrix out = X;
        for (std::size_t j = 0; j < p_; ++j) {
            if (!categorical_[j]) continue;
            const auto& code_map = codes_[j];
            const auto unseen = static_cast<double>(code_map.size());
            for (std::size_t i = 0; i < X.rows(); ++i) {
                auto it = code_map.find(X(i, j));
                out(i, j) = it == code_map.end() ? unseen : static_cast<double>(it->second);
            }
        }
        return out;
    }
    std::size_t out_cols() const override { return p_; }

private:
    std::size_t p_ = 0;
    std::vector<bool> categorical_;
    std::vector<std::map<double, int>> codes_; // value -> first-appearance code
};

class EqualWidthBins final : public FittedTransform {
public:
    EqualWidthBins(const Matrix& X, std::span<const int> fit_rows, const std::vector<bool>& mask, int bins)
        : bins_(bins) {
        if (bins < 2) throw std::invalid_argument("equal_width_bins: bins must be >= 2");
        const std::size_t p = X.cols();
        lo_.assign(p, std::numeric_limits<double>::infinity());
        width_.assign(p, 0.0);
        numeric_.resize(p);
        for (std::size_t j = 0; j < p; ++j) numeric_[j] = !mask[j];
        std::vector<double> hi(p, -std::numeric_limits<double>::infinity());
        for (int r : fit_rows) {
            auto row = X.row(static_cast<std::size_t>(r));
            for (std::size_t j = 0; j < p; ++j) {
                if (!numeric_[j]) continue;
                lo_[j] = std::min(lo_[j], row[j]);
                hi[j] = std::max(hi[j], row[j]);
            }
        }
        for (std::size_t j = 0; j < p; ++j)
            if (numeric_[j]) width_[j] = (hi[j] - lo_[j]) / bins;
    }

    Matrix apply(const Matrix& X) const override {
        Matrix out = X;
        for (std::size_t j = 0; j < X.cols(); ++j) {
            if (!numeric_[j]) continue;
            for (std::size_t i = 0; i < X.rows(); ++i) {
                if (width_[j] < 1e-12) {
                    out(i, j) = 0.0;
                    continue;
                }
                auto b = static_cast<int>((X(i, j) - lo_[j]) / width_[j]);
                out(i, j) = static_cast<double>(std::clamp(b, 0, bins_ - 1));
            }
        }
        return out;
    }
    std::size_t out_cols() const override { return lo_.size(); }

private:
    int bins_;
    std::vector<double> lo_, width_;
    std::vector<bool> numeric_;
};

class Pca final : public FittedTransform {
public:
    Pca(const Matrix& X, std::span<const int> fit_rows, int components) {
        const std::size_t p = X.cols();
        if (components < 1 || components > static_cast<int>(p))
            throw std::invalid_argument("pca: components must be in [1, p]");
        mean_.assign(p, 0.0);
        for (int r : fit_rows) {
            auto row = X.row(static_cast<std::size_t>(r));
            for (std::size_t j = 0; j < p; ++j) mean_[j] += row[j];
        }
        const double inv_m = 1.0 / static_cast<double>(fit_rows.size());
        for (std::size_t j = 0; j < p; ++j) mean_[j] *= inv_m;

        // Covariance of the fit rows, then top components by deflated power
        // iteration with a fixed start vector so refits are bit-identical.
        std::vector<double> cov(p * p, 0.0);
        for (int r : fit_rows) {
            auto row = X.row(static_cast<std::size_t>(r));
            for (std::size_t a = 0; a < p; ++a) {
                const double da = row[a] - mean_[a];
                for (std::size_t b = a; b < p; ++b)
                    cov[a * p + b] += da * (row[b] - mean_[b]);
            }
        }
        const double denom = std::max<double>(1.0, static_cast<double>(fit_rows.size()) - 1.0);
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = a; b < p; ++b) {
                cov[a * p + b] /= denom;
                cov[b * p + a] = cov[a * p + b];
            }

        comps_.assign(static_cast<std::size_t>(components), std::vector<double>(p, 0.0));
        std::vector<double> v(p), w(p);
        for (int c = 0; c < components; ++c) {
            // start at the axis with the largest remaining variance
            std::size_t pivot = 0;
            for (std::size_t j = 1; j < p; ++j)
                if (cov[j * p + j] > cov[pivot * p + pivot]) pivot = j;
            std::fill(v.begin(), v.end(), 0.0);
            v[pivot] = 1.0;
            double lambda = 0.0;
            for (int it = 0; it < 200; ++it) {
                for (std::size_t a = 0; a < p; ++a) {
                    double s = 0.0;
                    for (std::size_t b = 0; b < p; ++b) s += cov[a * p + b] * v[b];
                    w[a] = s;
                }
                double norm = 0.0;
                for (double x : w) norm += x * x;
                norm = std::sqrt(norm);
                if (norm < 1e-300) break; // exhausted variance: keep axis vector
                for (std::size_t a = 0; a < p; ++a) v[a] = w[a] / norm;
                lambda = norm;
            }
            // sign convention: the largest-magnitude coordinate is positive
            std::size_t arg = 0;
            for (std::size_t j = 1; j < p; ++j)
                if (std::abs(v[j]) > std::abs(v[arg])) arg = j;
            if (v[arg] < 0)
                for (double& x : v) x = -x;
            comps_[static_cast<std::size_t>(c)] = v;
            for (std::size_t a = 0; a < p; ++a)
                for (std::size_t b = 0; b < p; ++b) cov[a * p + b] -= lambda * v[a] * v[b];
        }
    }

    Matrix apply(const Matrix& X) const override {
        Matrix out(X.rows(), comps_.size());
        for (std::size_t i = 0; i < X.rows(); ++i) {
            auto row = X.row(i);
            for (std::size_t c = 0; c < comps_.size(); ++c) {
                double s = 0.0;
                for (std::size_t j = 0; j < row.size(); ++j)
                    s += (row[j] - mean_[j]) * comps_[c][j];
                out(i, c) = s;
            }
        }
        return out;
    }
    std::size_t out_cols() const override { return comps_.size(); }

private:
    std::vector<double> mean_;
    std::vector<std::vector<double>> comps_;
};

// encode (when categoricals exist) -> zscale -> pca
class Chained final : public FittedTransform {
public:
    Chained(const Matrix& X, std::span<const int> fit_rows, const std::vector<bool>& mask, int components) {
        const bool any_cat = std::find(mask.begin(), mask.end(), true) != mask.end();
        Matrix stage = X;
        if (any_cat) {
            encode_ = std::make_unique<OrdinalEncode>(X, fit_rows, mask);
            stage = encode_->apply(X);
        }
        scale_ = std::make_unique<ZScale>(stage, fit_rows);
        stage = scale_->apply(stage);
        pca_ = std::make_unique<Pca>(stage, fit_rows, components);
    }

    Matrix apply(const Matrix& X) const override {
        Matrix stage = encode_ ? encode_->apply(X) : X;
        stage = scale_->apply(stage);
        return pca_->apply(stage);
    }
    std::size_t out_cols() const override { return pca_->out_cols(); }

private:
    std::unique_ptr<OrdinalEncode> encode_;
    std::unique_ptr<ZScale> scale_;
    std::unique_ptr<Pca> pca_;
};

} // namespace

std::unique_ptr<FittedTransform> fit_transform(TransformKind kind, const Matrix& X,
                                               std::span<const int> fit_rows,
                                               const std::vector<bool>& categorical_mask,
                                               const TransformParams& params) {
    if (fit_rows.empty()) throw std::invalid_argument("fit_transform: empty fit rows");
    const int p = static_cast<int>(X.cols());
    const int components = params.components > 0 ? params.components : (p + 1) / 2;
    switch (kind) {
        case TransformKind::zscale: return std::make_unique<ZScale>(X, fit_rows);
        case TransformKind::minmax: return std::make_unique<MinMax>(X, fit_rows);
        case TransformKind::ordinal_encode:
            return std::make_unique<OrdinalEncode>(X, fit_rows, categorical_mask);
        case TransformKind::equal_width_bins:
            return std::make_unique<EqualWidthBins>(X, fit_rows, categorical_mask, params.bins);
        case TransformKind::pca: return std::make_unique<Pca>(X, fit_rows, components);
        case TransformKind::chained:
            return std::make_unique<Chained>(X, fit_rows, categorical_mask, components);
        case TransformKind::outlier_trim:
            throw std::invalid_argument("outlier_trim is row removal; use trim_kept_rows");
    }
    throw std::invalid_argument("fit_transform: unknown kind");
}

std::vector<int> trim_kept_rows(const Matrix& X, std::span<const int> centroid_rows,
                                std::span<const int> candidate_rows, double trim) {
    if (trim < 0.0 || trim >= 0.5)
        throw std::invalid_argument("trim_kept_rows: trim must be in [0, 0.5)");
    const std::size_t p = X.cols();
    std::vector<double> centroid(p, 0.0);
    for (int r : centroid_rows) {
        auto row = X.row(static_cast<std::size_t>(r));
        for (std::size_t j = 0; j < p; ++j) centroid[j] += row[j];
    }
    for (std::size_t j = 0; j < p; ++j) centroid[j] /= static_cast<double>(centroid_rows.size());

    const auto n_remove = static_cast<std::size_t>(trim * static_cast<double>(candidate_rows.size()));
    if (n_remove == 0) return {candidate_rows.begin(), candidate_rows.end()};

    std::vector<std::pair<double, int>> by_dist;
    by_dist.reserve(candidate_rows.size());
    for (int r : candidate_rows) {
        auto row = X.row(static_cast<std::size_t>(r));
        double d2 = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            const double d = row[j] - centroid[j];
            d2 += d * d;
        }
        by_dist.emplace_back(d2, r);
    }
    // farthest removed; ties resolve to the higher row index being removed
    std::sort(by_dist.begin(), by_dist.end());
    std::vector<bool> removed(X.rows(), false);
    for (std::size_t i = by_dist.size() - n_remove; i < by_dist.size(); ++i)
        removed[static_cast<std::size_t>(by_dist[i].second)] = true;
    std::vector<int> kept;
    kept.reserve(candidate_rows.size() - n_remove);
    for (int r : candidate_rows)
        if (!removed[static_cast<std::size_t>(r)]) kept.push_back(r);
    return kept;
}

std::vector<double> target_encode_column(std::span<const double> column,
                                         std::span<const int> labels,
                                         std::span<const int> fit_rows,
                                         double smoothing) {
    if (smoothing < 0) throw std::invalid_argument("target_encode_column: smoothing must be >= 0");
    if (fit_rows.empty()) throw std::invalid_argument("target_encode_column: empty fit rows");
    double global_sum = 0.0;
    std::map<double, std::pair<double, int>> stats; // value -> (label sum, count)
    for (int r : fit_rows) {
        const double v = column[static_cast<std::size_t>(r)];
        const double y = labels[static_cast<std::size_t>(r)];
        global_sum += y;
        auto& [sum, count] = stats[v];
        sum += y;
        ++count;
    }
    const double global_mean = global_sum / static_cast<double>(fit_rows.size());
    std::vector<double> out(column.size());
    for (std::size_t i = 0; i < column.size(); ++i) {
        auto it = stats.find(column[i]);
        if (it == stats.end()) {
            out[i] = global_mean;
            continue;
        }
        const auto& [sum, count] = it->second;
        const double denom = count + smoothing;
        out[i] = denom > 0 ? (sum + smoothing * global_mean) / denom : global_mean;
    }
    return out;
}

std::vector<int> select_top_features(const Matrix& X, std::span<const int> labels,
                                     std::span<const int> rows, int top_m) {
    const int p = static_cast<int>(X.cols());
    if (top_m < 1 || top_m > p)
        throw std::invalid_argument("select_top_features: top_m must be in [1, p]");
    const auto m = static_cast<double>(rows.size());
    double y_mean = 0.0;
    for (int r : rows) y_mean += labels[static_cast<std::size_t>(r)];
    y_mean /= m;
    double sy = 0.0;
    for (int r : rows) {
        const double d = labels[static_cast<std::size_t>(r)] - y_mean;
        sy += d * d;
    }

    std::vector<std::pair<double, int>> scored(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) {
        double x_mean = 0.0;
        for (int r : rows) x_mean += X(static_cast<std::size_t>(r), static_cast<std::size_t>(j));
        x_mean /= m;
        double sxy = 0.0, sx = 0.0;
        for (int r : rows) {
            const double dx = X(static_cast<std::size_t>(r), static_cast<std::size_t>(j)) - x_mean;
            sxy += dx * (labels[static_cast<std::size_t>(r)] - y_mean);
            sx += dx * dx;
        }
        const double denom = std::sqrt(sx * sy);
        const double r_abs = denom > 1e-300 ? std::abs(sxy / denom) : 0.0;
        scored[static_cast<std::size_t>(j)] = {-r_abs, j}; // sort ascending = |r| descending, ties lowest index
    }
    std::sort(scored.begin(), scored.end());
    std::vector<int> selected;
    selected.reserve(static_cast<std::size_t>(top_m));
    for (int i = 0; i < top_m; ++i) selected.push_back(scored[static_cast<std::size_t>(i)].second);
    std::sort(selected.begin(), selected.end());
    return selected;
}

std::vector<double> smote_point(std::span<const double> base, std::span<const double> neighbor, double u) {
    if (base.size() != neighbor.size()) throw std::invalid_argument("smote_point: dimension mismatch");
    std::vector<double> out(base.size());
    for (std::size_t j = 0; j < base.size(); ++j) out[j] = base[j] + u * (neighbor[j] - base[j]);
    return out;
}

} // namespace leaklab::inject
