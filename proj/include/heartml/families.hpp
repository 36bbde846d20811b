#pragma once

#include <memory>

#include "heartml/forest.hpp"
#include "heartml/knn.hpp"
#include "heartml/logistic.hpp"
#include "heartml/tuning.hpp"

namespace heartml {

/// logreg candidates may set l2_lambda, max_iter, tol, learning_rate;
/// anything else in the base config is kept.
class LogRegFamily : public ModelFamilyOps {
public:
    explicit LogRegFamily(LogRegConfig base = {}) : base_(base) {}
    std::string name() const override { return "logreg"; }
    std::unique_ptr<Classifier> make(const Candidate& params) const override;

private:
    LogRegConfig base_;
};

/// knn candidates set k only.
class KnnFamily : public ModelFamilyOps {
public:
    explicit KnnFamily(std::size_t default_k = 5) : default_k_(default_k) {}
    std::string name() const override { return "knn"; }
    std::unique_ptr<Classifier> make(const Candidate& params) const override;

private:
    std::size_t default_k_;
};

/// forest candidates may set n_trees, max_depth (null = unbounded),
/// min_samples_split, min_samples_leaf, max_features; seed and bootstrap
/// come from the base config. Candidates differing only in n_trees are
/// scored from one fitted ensemble (smaller forests are exact prefixes of
/// larger ones because per-tree seeds are pre-derived).
class ForestFamily : public ModelFamilyOps {
public:
    explicit ForestFamily(ForestConfig base = {}) : base_(base) {}
    std::string name() const override { return "forest"; }
    std::unique_ptr<Classifier> make(const Candidate& params) const override;
    std::string group_key(const Candidate& params) const override;
    std::vector<double> score_group(const std::vector<Candidate>& group, const Matrix& train_x,
                                    const std::vector<int>& train_y, const Matrix& test_x,
                                    const std::vector<int>& test_y) const override;

private:
    ForestConfig config_from(const Candidate& params) const;

    ForestConfig base_;
};

std::unique_ptr<ModelFamilyOps> make_family_ops(ModelFamily family, std::uint64_t seed);

}  // namespace heartml
