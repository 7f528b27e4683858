#include <cmath>

#include "leaklab/models_detail.hpp"

namespace leaklab::models::detail {

namespace {

class GnbModel final : public Model {
public:
    GnbModel(std::vector<double> mean0, std::vector<double> var0,
             std::vector<double> mean1, std::vector<double> var1,
             double log_prior0, double log_prior1)
        : mean0_(std::move(mean0)), var0_(std::move(var0)),
          mean1_(std::move(mean1)), var1_(std::move(var1)),
          log_prior0_(log_prior0), log_prior1_(log_prior1) {}

    std::vector<double> score(const Matrix& X) const override {
        std::vector<double> out(X.rows());
        for (std::size_t i = 0; i < X.rows(); ++i) {
            auto row = X.row(i);
            double l0 = log_prior0_, l1 = log_prior1_;
            for (std::size_t j = 0; j < row.size(); ++j) {
                l0 += log_gauss(row[j], mean0_[j], var0_[j]);
                l1 += log_gauss(row[j], mean1_[j], var1_[j]);
            }
            // posterior via logsumexp
            const double m = std::max(l0, l1);
            out[i] = std::exp(l1 - m) / (std::exp(l0 - m) + std::exp(l1 - m));
        }
        return out;
    }
    std::size_t n_features() const override { return mean0_.size(); }

private:
    static double log_gauss(double x, double mu, double var) {
        const double d = x - mu;
        return -0.5 * (std::log(2.0 * M_PI * var) + d * d / var);
    }

    std::vector<double> mean0_, var0_, mean1_, var1_;
    double log_prior0_, log_prior1_;
};

} // namespace

std::shared_ptr<const Model> fit_gnb(const ModelSpec& spec, const Matrix& X, std::span<const int> y) {
    const std::size_t n = X.rows(), p = X.cols();
    const double smoothing = spec.get("var_smoothing", 1e-9);

    std::vector<double> mean[2] = {std::vector<double>(p, 0.0), std::vector<double>(p, 0.0)};
    std::vector<double> var[2] = {std::vector<double>(p, 0.0), std::vector<double>(p, 0.0)};
    std::size_t count[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
        const int c = y[i];
        ++count[c];
        auto row = X.row(i);
        for (std::size_t j = 0; j < p; ++j) mean[c][j] += row[j];
    }
    for (int c = 0; c < 2; ++c)
        for (std::size_t j = 0; j < p; ++j) mean[c][j] /= static_cast<double>(count[c]);
    for (std::size_t i = 0; i < n; ++i) {
        const int c = y[i];
        auto row = X.row(i);
        for (std::size_t j = 0; j < p; ++j) {
            const double d = row[j] - mean[c][j];
            var[c][j] += d * d;
        }
    }
    // epsilon scaled by the largest overall feature variance, so constant
    // features stay usable
    double max_var = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        double mu = 0.0;
        for (std::size_t i = 0; i < n; ++i) mu += X(i, j);
        mu /= static_cast<double>(n);
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = X(i, j) - mu;
            v += d * d;
        }
        max_var = std::max(max_var, v / static_cast<double>(n));
    }
    const double eps = std::max(smoothing * max_var, 1e-12);
    for (int c = 0; c < 2; ++c)
        for (std::size_t j = 0; j < p; ++j)
            var[c][j] = var[c][j] / static_cast<double>(count[c]) + eps;

    const double log_prior0 = std::log(static_cast<double>(count[0]) / static_cast<double>(n));
    const double log_prior1 = std::log(static_cast<double>(count[1]) / static_cast<double>(n));
    return std::make_shared<GnbModel>(std::move(mean[0]), std::move(var[0]),
                                      std::move(mean[1]), std::move(var[1]),
                                      log_prior0, log_prior1);
}

} // namespace leaklab::models::detail
