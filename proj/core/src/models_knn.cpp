#include <algorithm>
#include <cmath>

#include "leaklab/models_detail.hpp"

namespace leaklab::models::detail {

namespace {

// Euclidean k-NN on a z-scored copy of the training data. The scaling
// parameters are learned inside fit, so fold-local usage stays clean.
class KnnModel final : public Model {
public:
    KnnModel(Matrix train, std::vector<int> labels, std::vector<double> mean,
             std::vector<double> sd, int k)
        : train_(std::move(train)), labels_(std::move(labels)),
          mean_(std::move(mean)), sd_(std::move(sd)), k_(k) {}

    std::vector<double> score(const Matrix& X) const override {
        const std::size_t n_train = train_.rows();
        const std::size_t p = train_.cols();
        const int k = std::min<int>(k_, static_cast<int>(n_train));
        std::vector<double> out(X.rows());
        std::vector<double> q(p);
        std::vector<std::pair<double, int>> dist(n_train);
        for (std::size_t i = 0; i < X.rows(); ++i) {
            auto row = X.row(i);
            for (std::size_t j = 0; j < p; ++j) q[j] = (row[j] - mean_[j]) / sd_[j];
            for (std::size_t t = 0; t < n_train; ++t) {
                auto tr = train_.row(t);
                double d2 = 0.0;
                for (std::size_t j = 0; j < p; ++j) {
                    const double d = q[j] - tr[j];
                    d2 += d * d;
                }
                dist[t] = {d2, static_cast<int>(t)};
            }
            std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
            int pos = 0;
            for (int t = 0; t < k; ++t) pos += labels_[static_cast<std::size_t>(dist[static_cast<std::size_t>(t)].second)];
            out[i] = static_cast<double>(pos) / k;
        }
        return out;
    }
    std::size_t n_features() const override { return train_.cols(); }

private:
    Matrix train_;
    std::vector<int> labels_;
    std::vector<double> mean_, sd_;
    int k_;
};

} // namespace

std::shared_ptr<const Model> fit_knn(const ModelSpec& spec, const Matrix& X, std::span<const int> y) {
    const int k = static_cast<int>(spec.get("k", 5));
    const std::size_t n = X.rows(), p = X.cols();
    std::vector<double> mean(p, 0.0), sd(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = X.row(i);
        for (std::size_t j = 0; j < p; ++j) mean[j] += row[j];
    }
    for (std::size_t j = 0; j < p; ++j) mean[j] /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = X.row(i);
        for (std::size_t j = 0; j < p; ++j) {
            const double d = row[j] - mean[j];
            sd[j] += d * d;
        }
    }
    for (std::size_t j = 0; j < p; ++j) {
        sd[j] = std::sqrt(sd[j] / static_cast<double>(n));
        if (sd[j] < 1e-12) sd[j] = 1.0; // constant column: leave centered values at 0
    }
    Matrix scaled(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) scaled(i, j) = (X(i, j) - mean[j]) / sd[j];
    return std::make_shared<KnnModel>(std::move(scaled), std::vector<int>(y.begin(), y.end()),
                                      std::move(mean), std::move(sd), k);
}

} // namespace leaklab::models::detail
