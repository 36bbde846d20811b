#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "heartml/classifier.hpp"

namespace heartml {

double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// k-nearest-neighbors vote with a fully deterministic tie cascade:
/// neighbors rank by (distance, original row id) ascending; a tied vote
/// goes to the class with the smaller summed neighbor distance, and to
/// class 0 if still tied. Training rows are stored sorted by row id so
/// the input order never matters.
class KnnModel : public Classifier {
public:
    explicit KnnModel(std::size_t k);

    void fit(const Matrix& x, const std::vector<int>& y) override;  // ids 0..n-1
    void fit(const Matrix& x, const std::vector<int>& y, std::vector<std::int64_t> row_ids);

    int predict(std::span<const double> row) const override;
    /// Fraction of the k nearest neighbors labeled 1.
    double predict_proba(std::span<const double> row) const override;

    std::size_t k() const { return k_; }
    bool fitted() const { return fitted_; }
    const Matrix& train_features() const { return features_; }
    const std::vector<int>& train_labels() const { return labels_; }
    const std::vector<std::int64_t>& train_row_ids() const { return row_ids_; }

private:
    struct Neighbor {
        double distance;
        std::int64_t row_id;
        int label;
    };
    std::vector<Neighbor> nearest(std::span<const double> row) const;

    std::size_t k_;
    Matrix features_;
    std::vector<int> labels_;
    std::vector<std::int64_t> row_ids_;
    bool fitted_ = false;
};

struct KSweepResult {
    std::vector<std::size_t> ks;
    std::vector<double> train_scores;
    std::vector<double> test_scores;
};

/// Accuracy on train and test for k = 1..k_max, each k fitted on the
/// training data.
KSweepResult k_sweep(const Matrix& train_x, const std::vector<int>& train_y,
                     const Matrix& test_x, const std::vector<int>& test_y, std::size_t k_max);

}  // namespace heartml
