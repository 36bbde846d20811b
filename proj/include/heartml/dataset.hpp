#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

#include "heartml/matrix.hpp"
#include "heartml/schema.hpp"

namespace heartml {

/// Immutable-after-construction table of predictors plus binary target.
/// row_ids keep the original CSV row positions so that subsets remain
/// traceable (and give k-NN its canonical ordering).
struct Dataset {
    Matrix features;                    // n x predictor_count, NaN = missing
    std::vector<int> target;            // 0/1
    std::vector<std::int64_t> row_ids;  // original row indices
    FeatureSchema schema;

    std::size_t size() const { return target.size(); }
    std::size_t missing_count() const;

    /// New dataset holding the given rows (row_ids carried over).
    Dataset subset(std::span<const std::size_t> rows) const;
};

/// (count of target == 0, count of target == 1)
std::pair<std::size_t, std::size_t> class_counts(const Dataset& ds);

/// Number of feature-identical row pairs that carry different labels.
std::size_t contradictory_duplicate_count(const Dataset& ds);

/// Parse a header-mandatory CSV against the schema. Empty cells and "?"
/// become NaN; coded columns are range-checked; any violation reports the
/// offending data row (1-based, header excluded) and column.
Dataset load_csv(const std::filesystem::path& path, const FeatureSchema& schema);

/// Inverse of load_csv up to float formatting; reloading yields an
/// identical matrix.
void save_csv(const Dataset& ds, const std::filesystem::path& path);

struct SplitIndices {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    std::uint64_t seed = 0;
    double test_fraction = 0.0;
};

/// Shuffle 0..n-1 with Rng(seed); the last ceil(test_fraction * n)
/// positions of the shuffled order form the test set.
SplitIndices train_test_split(std::size_t n_rows, double test_fraction, std::uint64_t seed);
SplitIndices train_test_split(const Dataset& ds, double test_fraction, std::uint64_t seed);

struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;  // fold label per row
    std::uint64_t seed = 0;

    std::vector<std::size_t> fold_rows(std::size_t fold) const;
    std::vector<std::size_t> complement_rows(std::size_t fold) const;
};

/// Stratified fold assignment: each class's rows are shuffled with
/// Rng(seed) (class 0 first, one generator for both) and dealt round-robin
/// with a fold cursor that continues across classes, keeping fold sizes
/// within 1 of each other and per-class counts within 1 across folds.
FoldPlan stratified_kfold(std::span<const int> target, std::size_t k, std::uint64_t seed);

}  // namespace heartml
