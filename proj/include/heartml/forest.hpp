#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "heartml/classifier.hpp"
#include "heartml/rng.hpp"

namespace heartml {

/// Flat tree storage; node 0 is the root, children are appended left
/// subtree first. feature < 0 marks a leaf. All nodes keep their class
/// counts (leaves for voting, internal nodes for impurity bookkeeping).
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t n0 = 0;
    std::uint32_t n1 = 0;

    bool is_leaf() const { return feature < 0; }
};

struct Tree {
    std::vector<TreeNode> nodes;

    /// Route a row to its leaf (x[feature] <= threshold goes left) and
    /// return the leaf majority, class 0 on a tied leaf.
    int predict(std::span<const double> row) const;
    std::size_t leaf_for(std::span<const double> row) const;
};

struct ForestConfig {
    std::size_t n_trees = 100;
    std::optional<std::size_t> max_depth;  // absent = unbounded
    std::size_t min_samples_split = 2;
    std::size_t min_samples_leaf = 1;
    std::size_t max_features = 3;          // floor(sqrt(13))
    std::uint64_t seed = 42;
    bool bootstrap = true;

    bool operator==(const ForestConfig&) const = default;
};

/// 1 - p0^2 - p1^2 over the node's class proportions.
double gini(std::uint64_t n0, std::uint64_t n1);

struct SplitChoice {
    std::size_t feature = 0;
    double threshold = 0.0;
    double weighted_gini = 0.0;
};

/// Best (feature, threshold) over the candidate features: thresholds are
/// midpoints between consecutive distinct sorted values, scored by the
/// size-weighted mean of child Ginis. Ties break by lower score, lower
/// feature index, lower threshold. Splits leaving a child below
/// min_samples_leaf are skipped, as are impurity-increasing ones;
/// zero-gain splits are kept (XOR-style interactions need them).
std::optional<SplitChoice> best_split(const Matrix& x, const std::vector<int>& y,
                                      std::span<const std::size_t> rows,
                                      std::span<const std::size_t> feature_candidates,
                                      std::size_t min_samples_leaf);

/// Recursive CART growth. The rng is consumed in a fixed order: the
/// feature draw for a node happens before its left subtree, which is
/// fully grown before the right.
Tree grow_tree(const Matrix& x, const std::vector<int>& y, std::span<const std::size_t> rows,
               const ForestConfig& config, Rng& rng);

/// Bagged CART ensemble. Per-tree seeds are pre-derived sequentially from
/// the master seed, so growing trees in parallel cannot change the result.
class RandomForestModel : public Classifier {
public:
    explicit RandomForestModel(ForestConfig config = {}) : config_(config) {}

    void fit(const Matrix& x, const std::vector<int>& y) override;

    /// Majority vote over per-tree leaf majorities; ties go to class 0.
    int predict(std::span<const double> row) const override;
    /// Fraction of trees voting class 1.
    double predict_proba(std::span<const double> row) const override;

    /// Predictions a forest truncated to the first `cut` trees would make,
    /// one per entry of `cuts` (each 1..n_trees, ascending). Because
    /// per-tree seeds are pre-derived, the truncated forest is exactly the
    /// forest fitted with n_trees = cut; every tree is walked once.
    std::vector<int> predict_at_cuts(std::span<const double> row,
                                     std::span<const std::size_t> cuts) const;

    /// Mean decrease in impurity per feature, normalized to sum 1
    /// (uniform when no tree ever split).
    std::vector<double> feature_importance() const;

    const ForestConfig& config() const { return config_; }
    const std::vector<Tree>& trees() const { return trees_; }
    const std::vector<std::uint64_t>& per_tree_seeds() const { return per_tree_seeds_; }
    bool single_class_warning() const { return single_class_warning_; }
    bool fitted() const { return fitted_; }
    std::size_t n_features() const { return n_features_; }

    /// Worker threads used while growing trees; result is identical for
    /// any value. Not part of the persisted model.
    void set_threads(std::size_t threads) { threads_ = threads == 0 ? 1 : threads; }

    static RandomForestModel restore(ForestConfig config, std::vector<Tree> trees,
                                     std::vector<std::uint64_t> per_tree_seeds,
                                     bool single_class_warning, std::size_t n_features);

private:
    ForestConfig config_;
    std::vector<Tree> trees_;
    std::vector<std::uint64_t> per_tree_seeds_;
    bool single_class_warning_ = false;
    bool fitted_ = false;
    std::size_t n_features_ = 0;
    std::size_t threads_ = 1;
};

}  // namespace heartml
