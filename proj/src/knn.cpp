#include "heartml/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "heartml/error.hpp"

namespace heartml {

namespace {

[[noreturn]] void model_error(const std::string& msg) {
    throw Error(Stage::Model, ErrorKind::Validation, msg);
}

}  // namespace

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) model_error("distance between vectors of different length");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

KnnModel::KnnModel(std::size_t k) : k_(k) {
    if (k == 0) model_error("k must be at least 1");
}

void KnnModel::fit(const Matrix& x, const std::vector<int>& y) {
    std::vector<std::int64_t> ids(x.rows);
    std::iota(ids.begin(), ids.end(), std::int64_t{0});
    fit(x, y, std::move(ids));
}

void KnnModel::fit(const Matrix& x, const std::vector<int>& y,
                   std::vector<std::int64_t> row_ids) {
    if (x.rows != y.size() || x.rows != row_ids.size()) {
        model_error("feature/target/id row counts differ");
    }
    if (k_ > x.rows) {
        model_error("k=" + std::to_string(k_) + " exceeds training size " +
                    std::to_string(x.rows));
    }

    // Canonical storage order: ascending original row id.
    std::vector<std::size_t> order(x.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&row_ids](std::size_t a, std::size_t b) { return row_ids[a] < row_ids[b]; });

    features_ = Matrix(x.rows, x.cols);
    labels_.resize(x.rows);
    row_ids_.resize(x.rows);
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::copy_n(x.row(order[i]).data(), x.cols, features_.row(i).data());
        labels_[i] = y[order[i]];
        row_ids_[i] = row_ids[order[i]];
    }
    fitted_ = true;
}

std::vector<KnnModel::Neighbor> KnnModel::nearest(std::span<const double> row) const {
    std::vector<Neighbor> all(features_.rows);
    for (std::size_t r = 0; r < features_.rows; ++r) {
        all[r] = {euclidean_distance(row, features_.row(r)), row_ids_[r], labels_[r]};
    }
    auto by_rank = [](const Neighbor& a, const Neighbor& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.row_id < b.row_id;
    };
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k_), all.end(),
                      by_rank);
    all.resize(k_);
    return all;
}

double KnnModel::predict_proba(std::span<const double> row) const {
    if (!fitted_) model_error("model is not fitted");
    const auto top = nearest(row);
    std::size_t ones = 0;
    for (const auto& nb : top) ones += static_cast<std::size_t>(nb.label);
    return static_cast<double>(ones) / static_cast<double>(k_);
}

int KnnModel::predict(std::span<const double> row) const {
    if (!fitted_) model_error("model is not fitted");
    const auto top = nearest(row);
    std::size_t votes[2] = {0, 0};
    double summed_distance[2] = {0.0, 0.0};
    for (const auto& nb : top) {
        votes[nb.label] += 1;
        summed_distance[nb.label] += nb.distance;
    }
    if (votes[1] != votes[0]) {
        return votes[1] > votes[0] ? 1 : 0;
    }
    if (summed_distance[0] != summed_distance[1]) {
        return summed_distance[0] < summed_distance[1] ? 0 : 1;
    }
    return 0;
}

KSweepResult k_sweep(const Matrix& train_x, const std::vector<int>& train_y,
                     const Matrix& test_x, const std::vector<int>& test_y, std::size_t k_max) {
    if (k_max == 0) model_error("k sweep needs a non-empty range");
    if (k_max > train_x.rows) {
        model_error("k sweep upper bound exceeds training size");
    }
    KSweepResult result;
    for (std::size_t k = 1; k <= k_max; ++k) {
        KnnModel model(k);
        model.fit(train_x, train_y);
        result.ks.push_back(k);
        result.train_scores.push_back(score_accuracy(model, train_x, train_y));
        result.test_scores.push_back(score_accuracy(model, test_x, test_y));
    }
    return result;
}

}  // namespace heartml
