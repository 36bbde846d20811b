#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "heartml/classifier.hpp"
#include "heartml/dataset.hpp"
#include "heartml/preprocess.hpp"

namespace heartml {

/// Grid cell: integer, real, or null (the unbounded max_depth option).
using ParamValue = std::variant<std::int64_t, double, std::monostate>;

std::string param_value_to_string(const ParamValue& value);

/// One hyperparameter assignment, ordered by parameter name.
using Candidate = std::vector<std::pair<std::string, ParamValue>>;

struct ParamGrid {
    // Ordered name -> value list. Names must be unique, lists non-empty.
    std::vector<std::pair<std::string, std::vector<ParamValue>>> entries;
};

/// Cartesian product with parameter names in lexicographic order and the
/// rightmost parameter varying fastest; values keep their list order.
std::vector<Candidate> expand_grid(const ParamGrid& grid);

struct CvConfig {
    std::size_t k = 5;
    std::uint64_t seed = 42;
};

/// Bridges the generic search loop to one model family: builds a
/// classifier from a candidate and serializes a fitted one for the
/// best-model record.
class ModelFamilyOps {
public:
    virtual ~ModelFamilyOps() = default;
    virtual std::string name() const = 0;
    virtual std::unique_ptr<Classifier> make(const Candidate& params) const = 0;

    /// Families whose candidates nest (ensembles differing only in size)
    /// may score a whole group from one fitted model per fold. Candidates
    /// with equal non-empty keys form a group; the default disables
    /// grouping. Grouped scores must equal the ones make()+fit would give.
    virtual std::string group_key(const Candidate& params) const {
        (void)params;
        return {};
    }
    /// Accuracy on (test_x, test_y) for each candidate of one group,
    /// fitted on (train_x, train_y). Only called when group_key is
    /// non-empty.
    virtual std::vector<double> score_group(const std::vector<Candidate>& group,
                                            const Matrix& train_x,
                                            const std::vector<int>& train_y,
                                            const Matrix& test_x,
                                            const std::vector<int>& test_y) const {
        (void)group;
        (void)train_x;
        (void)train_y;
        (void)test_x;
        (void)test_y;
        return {};
    }
};

struct CandidateResult {
    Candidate params;
    std::vector<double> fold_scores;
    double mean_score = 0.0;
    double std_score = 0.0;  // population std over folds
};

struct SearchResult {
    std::vector<CandidateResult> candidates;
    std::size_t best_index = 0;
    Candidate best_params;
    PipelineParams best_pipeline;                  // refit on the full provided set
    std::shared_ptr<Classifier> best_model;        // idem
};

struct CvDetail {
    std::vector<double> fold_scores;
    std::vector<PipelineParams> fold_pipelines;  // fitted per fold, train side only
};

/// Per fold: fit preprocessing on the k-1 training folds, transform both
/// sides, fit the model, score accuracy on the held-out fold.
CvDetail cross_val_detail(const ModelFamilyOps& family, const Candidate& params,
                          const Dataset& dataset, const CvConfig& cv);
std::vector<double> cross_val_score(const ModelFamilyOps& family, const Candidate& params,
                                    const Dataset& dataset, const CvConfig& cv);

/// Exhaustive search over the expanded grid; best = max mean score, ties
/// to the earliest candidate; the winner is refit on the full dataset.
SearchResult grid_search(const ModelFamilyOps& family, const ParamGrid& grid,
                         const Dataset& dataset, const CvConfig& cv, std::size_t threads = 1);

/// Evaluates min(n_iter, grid size) candidates sampled without
/// replacement from the expanded grid with Rng(seed), in sample order.
SearchResult randomized_search(const ModelFamilyOps& family, const ParamGrid& grid,
                               std::size_t n_iter, const Dataset& dataset, const CvConfig& cv,
                               std::uint64_t seed, std::size_t threads = 1);

/// Conventional search spaces: knn k in 1..20; logreg l2_lambda over 20
/// log-spaced values in [1e-4, 1e4]; forest n_trees x max_depth x
/// min_samples_split x min_samples_leaf (180 candidates).
ParamGrid default_grid(ModelFamily family);

/// Candidate table as CSV: index, parameters, per-fold scores, mean, std.
std::string candidates_csv(const SearchResult& result, std::size_t folds);

// Candidate field access; throws a tuning error on missing/mistyped names.
std::int64_t param_as_int(const Candidate& params, const std::string& name);
double param_as_real(const Candidate& params, const std::string& name);
std::optional<std::int64_t> param_as_opt_int(const Candidate& params, const std::string& name);

}  // namespace heartml
