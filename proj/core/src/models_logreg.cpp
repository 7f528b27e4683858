#include <algorithm>
#include <cmath>
#include <numeric>

#include "leaklab/models_detail.hpp"
#include "leaklab/rng.hpp"

namespace leaklab::models {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

class LinearModel final : public Model {
public:
    LinearModel(LinearParams params, std::size_t p) : params_(std::move(params)), p_(p) {}

    std::vector<double> score(const Matrix& X) const override {
        return linear_scores(params_, X);
    }
    std::size_t n_features() const override { return p_; }

private:
    LinearParams params_;
    std::size_t p_;
};

} // namespace

std::vector<double> linear_scores(const LinearParams& params, const Matrix& X) {
    std::vector<double> out(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) {
        double z = params.b;
        auto row = X.row(i);
        for (std::size_t j = 0; j < X.cols(); ++j) z += params.w[j] * row[j];
        out[i] = sigmoid(z);
    }
    return out;
}

double log_loss(const LinearParams& params, const Matrix& X, std::span<const int> y) {
    constexpr double eps = 1e-12;
    auto s = linear_scores(params, X);
    double loss = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double p = std::clamp(s[i], eps, 1.0 - eps);
        loss += y[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
    }
    return loss / static_cast<double>(s.size());
}

namespace detail {

std::shared_ptr<const Model> fit_logreg(const ModelSpec& spec, const Matrix& X, std::span<const int> y) {
    const double lr = spec.get("learning_rate", 0.1);
    const double l2 = spec.get("l2", 1e-4);
    const int epochs = static_cast<int>(spec.get("epochs", 200));
    const std::size_t n = X.rows(), p = X.cols();

    LinearParams params;
    params.w.assign(p, 0.0);
    std::vector<double> grad(p);
    for (int e = 0; e < epochs; ++e) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            auto row = X.row(i);
            double z = params.b;
            for (std::size_t j = 0; j < p; ++j) z += params.w[j] * row[j];
            const double err = sigmoid(z) - static_cast<double>(y[i]);
            for (std::size_t j = 0; j < p; ++j) grad[j] += err * row[j];
            grad_b += err;
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t j = 0; j < p; ++j)
            params.w[j] -= lr * (grad[j] * inv_n + l2 * params.w[j]);
        params.b -= lr * grad_b * inv_n;
    }
    return std::make_shared<LinearModel>(std::move(params), p);
}

} // namespace detail

std::vector<double> logreg_loss_path(const Matrix& X, std::span<const int> y,
                                     double learning_rate, double l2, int epochs) {
    const std::size_t n = X.rows(), p = X.cols();
    LinearParams params;
    params.w.assign(p, 0.0);
    std::vector<double> grad(p), losses;
    for (int e = 0; e < epochs; ++e) {
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            auto row = X.row(i);
            double z = params.b;
            for (std::size_t j = 0; j < p; ++j) z += params.w[j] * row[j];
            const double err = sigmoid(z) - static_cast<double>(y[i]);
            for (std::size_t j = 0; j < p; ++j) grad[j] += err * row[j];
            grad_b += err;
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t j = 0; j < p; ++j)
            params.w[j] -= learning_rate * (grad[j] * inv_n + l2 * params.w[j]);
        params.b -= learning_rate * grad_b * inv_n;
        double penalty = 0.0;
        for (double w : params.w) penalty += w * w;
        losses.push_back(log_loss(params, X, y) + 0.5 * l2 * penalty);
    }
    return losses;
}

std::vector<LinearParams> sgd_logreg_path(const Matrix& X, std::span<const int> y,
                                          const SgdOptions& opts) {
    const std::size_t n = X.rows(), p = X.cols();
    if (n == 0 || y.size() != n) throw std::invalid_argument("sgd_logreg_path: bad inputs");
    Rng rng(derive_seed(opts.seed, "sgd"));
    LinearParams params;
    params.w.assign(p, 0.0);
    std::vector<LinearParams> path;
    path.reserve(static_cast<std::size_t>(opts.epochs));
    auto order = identity_indices(n);
    const int batch = std::max(1, opts.batch);
    for (int e = 0; e < opts.epochs; ++e) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(batch)) {
            const std::size_t stop = std::min(n, start + static_cast<std::size_t>(batch));
            const double inv_m = 1.0 / static_cast<double>(stop - start);
            std::vector<double> grad(p, 0.0);
            double grad_b = 0.0;
            for (std::size_t t = start; t < stop; ++t) {
                const auto i = static_cast<std::size_t>(order[t]);
                auto row = X.row(i);
                double z = params.b;
                for (std::size_t j = 0; j < p; ++j) z += params.w[j] * row[j];
                const double err = sigmoid(z) - static_cast<double>(y[i]);
                for (std::size_t j = 0; j < p; ++j) grad[j] += err * row[j];
                grad_b += err;
            }
            for (std::size_t j = 0; j < p; ++j)
                params.w[j] -= opts.learning_rate * (grad[j] * inv_m + opts.l2 * params.w[j]);
            params.b -= opts.learning_rate * grad_b * inv_m;
        }
        path.push_back(params);
    }
    return path;
}

} // namespace leaklab::models
