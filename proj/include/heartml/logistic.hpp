#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "heartml/classifier.hpp"
#include "heartml/schema.hpp"

namespace heartml {

struct LogRegConfig {
    double l2_lambda = 1.0;
    std::size_t max_iter = 5000;
    double tol = 1e-6;         // on the gradient infinity-norm
    double learning_rate = 0.5;

    bool operator==(const LogRegConfig&) const = default;
};

/// Numerically stable logistic function; never exponentiates a large
/// positive argument.
double sigmoid(double z);

struct LossGrad {
    double loss = 0.0;
    std::vector<double> grad_weights;
    double grad_bias = 0.0;
};

/// Regularized mean negative log-likelihood and its gradient:
///   loss   = -(1/n) sum[y log p + (1-y) log(1-p)] + (lambda/(2n)) |w|^2
///   grad_w = (1/n) X^T (p - y) + (lambda/n) w
///   grad_b = (1/n) sum(p - y)
/// The bias is unregularized; log arguments are clamped to >= 1e-12.
LossGrad logreg_loss_gradient(std::span<const double> weights, double bias, const Matrix& x,
                              const std::vector<int>& y, double lambda);

/// Binary logistic regression fitted by full-batch gradient descent with a
/// fixed learning rate from zero initialization. Expects standardized
/// features.
class LogRegModel : public Classifier {
public:
    explicit LogRegModel(LogRegConfig config = {}) : config_(config) {}

    void fit(const Matrix& x, const std::vector<int>& y) override;
    int predict(std::span<const double> row) const override;  // p >= 0.5 -> 1
    double predict_proba(std::span<const double> row) const override;

    /// (feature name, raw signed weight) pairs in schema order.
    std::vector<std::pair<std::string, double>> coefficients(const FeatureSchema& schema) const;

    const LogRegConfig& config() const { return config_; }
    const std::vector<double>& weights() const { return weights_; }
    double bias() const { return bias_; }
    std::size_t iterations_run() const { return iterations_run_; }
    bool converged() const { return converged_; }
    bool fitted() const { return fitted_; }
    const std::vector<double>& loss_history() const { return loss_history_; }

    /// Restore a fitted state from persisted fields.
    static LogRegModel restore(LogRegConfig config, std::vector<double> weights, double bias,
                               std::size_t iterations_run, bool converged);

private:
    LogRegConfig config_;
    std::vector<double> weights_;
    double bias_ = 0.0;
    std::size_t iterations_run_ = 0;
    bool converged_ = false;
    bool fitted_ = false;
    std::vector<double> loss_history_;
};

}  // namespace heartml
