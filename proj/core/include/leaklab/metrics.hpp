#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace leaklab::metrics {

// Mann-Whitney AUC via rank-sum with average ranks for ties, O(n log n).
// Fraction of (positive, negative) pairs where the positive scores higher,
// ties counted 1/2. Throws if only one class is present.
double auc(std::span<const double> scores, std::span<const int> labels);

enum class Metric { AUC, accuracy, F1, precision, recall, MCC };

std::string to_string(Metric m);

struct MetricValue {
    Metric metric;
    double value;
    int n_scored;
};

// The five thresholded metrics plus AUC at a fixed threshold (predict
// positive when score > threshold). Degenerate marginals follow the usual
// conventions: precision/recall/F1 are 0 when their denominator is 0, MCC is
// 0 when any confusion-matrix marginal is 0.
std::vector<MetricValue> confusion_metrics(std::span<const double> scores,
                                           std::span<const int> labels,
                                           double threshold = 0.5);

struct FlipReport {
    bool flip = false;     // some metric pair strictly disagrees on the winner
    bool tie = false;      // at least one metric was an exact tie
    std::map<Metric, int> winner; // +1: A wins, -1: B wins, 0: tie
};

// Compares two models' per-metric results on one dataset. A tie on a metric
// is compatible with either winner and never creates a flip by itself.
FlipReport ranking_flip(std::span<const MetricValue> results_a,
                        std::span<const MetricValue> results_b);

} // namespace leaklab::metrics
