#include "leaklab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace leaklab::metrics {

double auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw std::invalid_argument("auc: length mismatch");
    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int y : labels) n_pos += (y == 1);
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("auc: both classes required");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t t = i; t <= j; ++t)
            if (labels[order[t]] == 1) rank_sum_pos += avg_rank;
        i = j + 1;
    }
    const double u = rank_sum_pos - static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::string to_string(Metric m) {
    switch (m) {
        case Metric::AUC: return "AUC";
        case Metric::accuracy: return "accuracy";
        case Metric::F1: return "F1";
        case Metric::precision: return "precision";
        case Metric::recall: return "recall";
        case Metric::MCC: return "MCC";
    }
    return "?";
}

std::vector<MetricValue> confusion_metrics(std::span<const double> scores,
                                           std::span<const int> labels,
                                           double threshold) {
    if (scores.size() != labels.size()) throw std::invalid_argument("confusion_metrics: length mismatch");
    double tp = 0, fp = 0, fn = 0, tn = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] > threshold;
        const bool truth = labels[i] == 1;
        if (pred && truth) ++tp;
        else if (pred && !truth) ++fp;
        else if (!pred && truth) ++fn;
        else ++tn;
    }
    const int n = static_cast<int>(scores.size());
    const double precision = (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
    const double recall = (tp + fn) > 0 ? tp / (tp + fn) : 0.0;
    const double f1 = (precision + recall) > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
    const double accuracy = (tp + tn) / static_cast<double>(n);
    double mcc = 0.0;
    const double denom2 = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (denom2 > 0) mcc = (tp * tn - fp * fn) / std::sqrt(denom2);

    return {
        {Metric::AUC, auc(scores, labels), n},
        {Metric::accuracy, accuracy, n},
        {Metric::F1, f1, n},
        {Metric::precision, precision, n},
        {Metric::recall, recall, n},
        {Metric::MCC, mcc, n},
    };
}

FlipReport ranking_flip(std::span<const MetricValue> results_a,
                        std::span<const MetricValue> results_b) {
    if (results_a.size() != results_b.size())
        throw std::invalid_argument("ranking_flip: mismatched metric sets");
    FlipReport report;
    bool saw_a = false, saw_b = false;
    for (std::size_t i = 0; i < results_a.size(); ++i) {
        if (results_a[i].metric != results_b[i].metric)
            throw std::invalid_argument("ranking_flip: mismatched metric sets");
        int w = 0;
        if (results_a[i].value > results_b[i].value) w = 1;
        else if (results_a[i].value < results_b[i].value) w = -1;
        else report.tie = true;
        report.winner[results_a[i].metric] = w;
        saw_a |= (w == 1);
        saw_b |= (w == -1);
    }
    report.flip = saw_a && saw_b;
    return report;
}

} // namespace leaklab::metrics
