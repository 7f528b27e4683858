#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "leaklab/matrix.hpp"

namespace leaklab::inject {

enum class TransformKind { zscale, minmax, ordinal_encode, equal_width_bins, outlier_trim, pca, chained };

std::string to_string(TransformKind k);
TransformKind transform_from_string(const std::string& s);

struct TransformParams {
    double trim = 0.1; // outlier_trim: fraction of training rows removed
    int bins = 5;      // equal_width_bins
    int components = 0; // pca: 0 = ceil(p/2)
};

// A transform whose parameters were estimated from fit rows only. apply()
// is pure and never re-estimates anything, so whether a workflow is clean
// or leaky is decided entirely by which rows were passed to fit.
class FittedTransform {
public:
    virtual ~FittedTransform() = default;
    virtual Matrix apply(const Matrix& X) const = 0;
    virtual std::size_t out_cols() const = 0;
};

// Fits `kind` on X[fit_rows]. ordinal_encode and chained need the
// categorical mask; ordinal_encode requires at least one categorical column.
// outlier_trim is row removal, not a feature map: use trim_kept_rows.
std::unique_ptr<FittedTransform> fit_transform(TransformKind kind, const Matrix& X,
                                               std::span<const int> fit_rows,
                                               const std::vector<bool>& categorical_mask,
                                               const TransformParams& params);

// Removes the `trim` fraction of candidate_rows farthest (Euclidean) from
// the centroid of centroid_rows; returns the kept rows in input order.
// trim must be < 0.5.
std::vector<int> trim_kept_rows(const Matrix& X, std::span<const int> centroid_rows,
                                std::span<const int> candidate_rows, double trim);

// Smoothed target encoding of one categorical column:
// code(c) = (count_c * mean_c + m * global_mean) / (count_c + m), statistics
// from fit_rows only; categories unseen in fit_rows map to the global mean.
std::vector<double> target_encode_column(std::span<const double> column,
                                         std::span<const int> labels,
                                         std::span<const int> fit_rows,
                                         double smoothing);

// Top-m features by |point-biserial correlation| with the label, computed on
// `rows` only. Ties resolve to the lowest feature index; the result is
// sorted ascending.
std::vector<int> select_top_features(const Matrix& X, std::span<const int> labels,
                                     std::span<const int> rows, int top_m);

// SMOTE interpolation: base + u * (neighbor - base).
std::vector<double> smote_point(std::span<const double> base, std::span<const double> neighbor, double u);

} // namespace leaklab::inject
