#include "heartml/logistic.hpp"

#include <algorithm>
#include <cmath>

#include "heartml/error.hpp"

namespace heartml {

namespace {

[[noreturn]] void model_error(const std::string& msg) {
    throw Error(Stage::Model, ErrorKind::Validation, msg);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

constexpr double kLogClamp = 1e-12;

}  // namespace

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

LossGrad logreg_loss_gradient(std::span<const double> weights, double bias, const Matrix& x,
                              const std::vector<int>& y, double lambda) {
    if (x.rows != y.size() || x.cols != weights.size()) {
        model_error("loss/gradient shape mismatch");
    }
    const auto n = static_cast<double>(x.rows);

    LossGrad out;
    out.grad_weights.assign(x.cols, 0.0);
    for (std::size_t r = 0; r < x.rows; ++r) {
        if (y[r] != 0 && y[r] != 1) {
            model_error("target values must be 0 or 1");
        }
        const auto row = x.row(r);
        const double p = sigmoid(dot(weights, row) + bias);
        const double target = static_cast<double>(y[r]);
        out.loss -= target * std::log(std::max(p, kLogClamp)) +
                    (1.0 - target) * std::log(std::max(1.0 - p, kLogClamp));
        const double residual = p - target;
        for (std::size_t c = 0; c < x.cols; ++c) {
            out.grad_weights[c] += residual * row[c];
        }
        out.grad_bias += residual;
    }
    out.loss /= n;
    out.grad_bias /= n;
    double weight_norm_sq = 0.0;
    for (std::size_t c = 0; c < x.cols; ++c) {
        out.grad_weights[c] = out.grad_weights[c] / n + lambda / n * weights[c];
        weight_norm_sq += weights[c] * weights[c];
    }
    out.loss += lambda / (2.0 * n) * weight_norm_sq;
    return out;
}

void LogRegModel::fit(const Matrix& x, const std::vector<int>& y) {
    if (x.rows != y.size()) model_error("feature/target row counts differ");
    if (x.rows < 2) model_error("need at least 2 rows to fit");
    for (double v : x.values) {
        if (std::isnan(v)) model_error("features contain NaN; impute before fitting");
    }
    const bool has0 = std::find(y.begin(), y.end(), 0) != y.end();
    const bool has1 = std::find(y.begin(), y.end(), 1) != y.end();
    if (!has0 || !has1) model_error("training targets contain a single class");

    weights_.assign(x.cols, 0.0);
    bias_ = 0.0;
    converged_ = false;
    iterations_run_ = 0;
    loss_history_.clear();

    for (std::size_t iter = 0; iter < config_.max_iter; ++iter) {
        const LossGrad lg = logreg_loss_gradient(weights_, bias_, x, y, config_.l2_lambda);
        double grad_inf = std::abs(lg.grad_bias);
        for (double g : lg.grad_weights) grad_inf = std::max(grad_inf, std::abs(g));
        loss_history_.push_back(lg.loss);
        if (grad_inf < config_.tol) {
            converged_ = true;
            break;
        }
        for (std::size_t c = 0; c < x.cols; ++c) {
            weights_[c] -= config_.learning_rate * lg.grad_weights[c];
        }
        bias_ -= config_.learning_rate * lg.grad_bias;
        ++iterations_run_;
    }
    fitted_ = true;
}

double LogRegModel::predict_proba(std::span<const double> row) const {
    if (!fitted_) model_error("model is not fitted");
    for (double v : row) {
        if (std::isnan(v)) model_error("prediction input contains NaN");
    }
    return sigmoid(dot(weights_, row) + bias_);
}

int LogRegModel::predict(std::span<const double> row) const {
    return predict_proba(row) >= 0.5 ? 1 : 0;
}

std::vector<std::pair<std::string, double>> LogRegModel::coefficients(
    const FeatureSchema& schema) const {
    if (!fitted_) model_error("model is not fitted");
    std::vector<std::pair<std::string, double>> pairs;
    const auto names = schema.predictor_names();
    pairs.reserve(names.size());
    for (std::size_t c = 0; c < names.size(); ++c) {
        pairs.emplace_back(names[c], weights_[c]);
    }
    return pairs;
}

LogRegModel LogRegModel::restore(LogRegConfig config, std::vector<double> weights, double bias,
                                 std::size_t iterations_run, bool converged) {
    LogRegModel model(config);
    model.weights_ = std::move(weights);
    model.bias_ = bias;
    model.iterations_run_ = iterations_run;
    model.converged_ = converged;
    model.fitted_ = true;
    return model;
}

}  // namespace heartml
