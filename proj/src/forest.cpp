#include "heartml/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>
#include <utility>

#include "heartml/error.hpp"

namespace heartml {

namespace {

[[noreturn]] void model_error(const std::string& msg) {
    throw Error(Stage::Model, ErrorKind::Validation, msg);
}

// Unchecked impurity for the hot split scan; callers guarantee n0+n1 > 0.
inline double gini_unchecked(double n0, double n1) {
    const double total = n0 + n1;
    const double p0 = n0 / total;
    const double p1 = n1 / total;
    return 1.0 - p0 * p0 - p1 * p1;
}

using ValueLabel = std::pair<double, int>;

std::optional<SplitChoice> best_split_impl(const Matrix& x, const std::vector<int>& y,
                                           std::span<const std::size_t> rows,
                                           std::span<const std::size_t> feature_candidates,
                                           std::size_t min_samples_leaf,
                                           std::vector<ValueLabel>& scratch) {
    const std::size_t m = rows.size();
    std::uint64_t pn0 = 0, pn1 = 0;
    for (std::size_t r : rows) (y[r] == 0 ? pn0 : pn1) += 1;
    const double parent = gini_unchecked(static_cast<double>(pn0), static_cast<double>(pn1));

    std::optional<SplitChoice> best;
    scratch.resize(m);

    for (std::size_t f : feature_candidates) {
        for (std::size_t i = 0; i < m; ++i) {
            scratch[i] = {x.at(rows[i], f), y[rows[i]]};
        }
        std::sort(scratch.begin(), scratch.end(),
                  [](const ValueLabel& a, const ValueLabel& b) { return a.first < b.first; });

        std::uint64_t c0 = 0, c1 = 0;  // class counts over scratch[0..i)
        for (std::size_t i = 1; i < m; ++i) {
            (scratch[i - 1].second == 0 ? c0 : c1) += 1;
            if (scratch[i].first == scratch[i - 1].first) continue;

            const double threshold = (scratch[i - 1].first + scratch[i].first) / 2.0;
            std::size_t left_n = i;
            std::uint64_t l0 = c0, l1 = c1;
            if (threshold >= scratch[i].first) {
                // Midpoint rounded up onto the right value: rows equal to
                // it route left under the <= predicate, so count them in.
                std::size_t j = i;
                while (j < m && scratch[j].first <= threshold) {
                    (scratch[j].second == 0 ? l0 : l1) += 1;
                    ++j;
                }
                left_n = j;
            }
            const std::size_t right_n = m - left_n;
            if (left_n < min_samples_leaf || right_n < min_samples_leaf) continue;

            const std::uint64_t r0 = pn0 - l0, r1 = pn1 - l1;
            const double weighted =
                (static_cast<double>(left_n) *
                     gini_unchecked(static_cast<double>(l0), static_cast<double>(l1)) +
                 static_cast<double>(right_n) *
                     gini_unchecked(static_cast<double>(r0), static_cast<double>(r1))) /
                static_cast<double>(m);
            // Zero-gain splits stay admissible (children shrink, so growth
            // still terminates); only impurity-increasing ones are dropped.
            if (weighted > parent) continue;

            const bool better =
                !best || weighted < best->weighted_gini ||
                (weighted == best->weighted_gini &&
                 (f < best->feature ||
                  (f == best->feature && threshold < best->threshold)));
            if (better) {
                best = SplitChoice{f, threshold, weighted};
            }
        }
    }
    return best;
}

struct GrowContext {
    const Matrix& x;
    const std::vector<int>& y;
    const ForestConfig& config;
    Rng& rng;
    std::vector<TreeNode>& nodes;
    std::vector<ValueLabel>& scratch;
};

// Rows are partitioned in place; order within a node never affects the
// chosen split or the counts, so an unstable partition is fine.
std::int32_t grow_node(GrowContext& ctx, std::span<std::size_t> rows, std::size_t depth) {
    std::uint32_t n0 = 0, n1 = 0;
    for (std::size_t r : rows) (ctx.y[r] == 0 ? n0 : n1) += 1;

    const auto index = static_cast<std::int32_t>(ctx.nodes.size());
    ctx.nodes.push_back(TreeNode{-1, 0.0, -1, -1, n0, n1});

    const bool pure = n0 == 0 || n1 == 0;
    const bool depth_capped = ctx.config.max_depth && depth >= *ctx.config.max_depth;
    if (pure || depth_capped || rows.size() < ctx.config.min_samples_split) {
        return index;
    }

    const std::size_t p = ctx.x.cols;
    const auto candidates =
        ctx.rng.sample_without_replacement(std::min(ctx.config.max_features, p), p);
    const auto split = best_split_impl(ctx.x, ctx.y, rows, candidates,
                                       ctx.config.min_samples_leaf, ctx.scratch);
    if (!split) {
        return index;
    }

    const std::size_t feature = split->feature;
    const double threshold = split->threshold;
    const auto mid = std::partition(rows.begin(), rows.end(), [&](std::size_t r) {
        return ctx.x.at(r, feature) <= threshold;
    });
    const auto left_count = static_cast<std::size_t>(mid - rows.begin());

    ctx.nodes[static_cast<std::size_t>(index)].feature = static_cast<int>(feature);
    ctx.nodes[static_cast<std::size_t>(index)].threshold = threshold;
    const std::int32_t left = grow_node(ctx, rows.subspan(0, left_count), depth + 1);
    ctx.nodes[static_cast<std::size_t>(index)].left = left;
    const std::int32_t right = grow_node(ctx, rows.subspan(left_count), depth + 1);
    ctx.nodes[static_cast<std::size_t>(index)].right = right;
    return index;
}

}  // namespace

int Tree::predict(std::span<const double> row) const {
    const TreeNode& leaf = nodes[leaf_for(row)];
    return leaf.n1 > leaf.n0 ? 1 : 0;
}

std::size_t Tree::leaf_for(std::span<const double> row) const {
    std::size_t node = 0;
    while (!nodes[node].is_leaf()) {
        const TreeNode& n = nodes[node];
        node = static_cast<std::size_t>(
            row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    return node;
}

double gini(std::uint64_t n0, std::uint64_t n1) {
    if (n0 + n1 == 0) model_error("gini of an empty node");
    return gini_unchecked(static_cast<double>(n0), static_cast<double>(n1));
}

std::optional<SplitChoice> best_split(const Matrix& x, const std::vector<int>& y,
                                      std::span<const std::size_t> rows,
                                      std::span<const std::size_t> feature_candidates,
                                      std::size_t min_samples_leaf) {
    if (rows.empty()) model_error("best_split on zero rows");
    std::vector<ValueLabel> scratch;
    return best_split_impl(x, y, rows, feature_candidates, min_samples_leaf, scratch);
}

Tree grow_tree(const Matrix& x, const std::vector<int>& y, std::span<const std::size_t> rows,
               const ForestConfig& config, Rng& rng) {
    if (rows.empty()) model_error("cannot grow a tree from zero rows");
    Tree tree;
    tree.nodes.reserve(64);
    std::vector<std::size_t> owned(rows.begin(), rows.end());
    std::vector<ValueLabel> scratch;
    GrowContext ctx{x, y, config, rng, tree.nodes, scratch};
    grow_node(ctx, owned, 0);
    return tree;
}

void RandomForestModel::fit(const Matrix& x, const std::vector<int>& y) {
    if (x.rows == 0) model_error("cannot fit a forest on empty data");
    if (x.rows != y.size()) model_error("feature/target row counts differ");
    if (x.rows < 2) model_error("need at least 2 rows to fit");
    for (double v : x.values) {
        if (std::isnan(v)) model_error("features contain NaN; impute before fitting");
    }
    const bool has0 = std::find(y.begin(), y.end(), 0) != y.end();
    const bool has1 = std::find(y.begin(), y.end(), 1) != y.end();
    single_class_warning_ = !(has0 && has1);
    n_features_ = x.cols;

    Rng master(config_.seed);
    per_tree_seeds_.resize(config_.n_trees);
    for (auto& seed : per_tree_seeds_) seed = master.next_u64();

    trees_.assign(config_.n_trees, Tree{});
    const std::size_t n = x.rows;

    std::atomic<std::size_t> next{0};
    auto grow_range = [&] {
        std::vector<std::size_t> rows(n);
        std::vector<ValueLabel> scratch;
        for (;;) {
            const std::size_t t = next.fetch_add(1, std::memory_order_relaxed);
            if (t >= config_.n_trees) return;
            Rng rng(per_tree_seeds_[t]);
            if (config_.bootstrap) {
                for (std::size_t i = 0; i < n; ++i) {
                    rows[i] = static_cast<std::size_t>(rng.below(n));
                }
            } else {
                for (std::size_t i = 0; i < n; ++i) rows[i] = i;
            }
            Tree tree;
            tree.nodes.reserve(64);
            GrowContext ctx{x, y, config_, rng, tree.nodes, scratch};
            grow_node(ctx, rows, 0);
            trees_[t] = std::move(tree);
        }
    };

    if (threads_ <= 1 || config_.n_trees <= 1) {
        grow_range();
    } else {
        const std::size_t workers = std::min(threads_, config_.n_trees);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(grow_range);
        }
        for (auto& th : pool) th.join();
    }
    fitted_ = true;
}

double RandomForestModel::predict_proba(std::span<const double> row) const {
    if (!fitted_) model_error("model is not fitted");
    std::size_t ones = 0;
    for (const Tree& tree : trees_) ones += static_cast<std::size_t>(tree.predict(row));
    return static_cast<double>(ones) / static_cast<double>(trees_.size());
}

int RandomForestModel::predict(std::span<const double> row) const {
    if (!fitted_) model_error("model is not fitted");
    std::size_t ones = 0;
    for (const Tree& tree : trees_) ones += static_cast<std::size_t>(tree.predict(row));
    return 2 * ones > trees_.size() ? 1 : 0;  // exact tie -> class 0
}

std::vector<int> RandomForestModel::predict_at_cuts(std::span<const double> row,
                                                    std::span<const std::size_t> cuts) const {
    if (!fitted_) model_error("model is not fitted");
    std::vector<int> out;
    out.reserve(cuts.size());
    std::size_t ones = 0, walked = 0;
    for (std::size_t cut : cuts) {
        if (cut < walked || cut > trees_.size()) {
            model_error("prediction cuts must be ascending and within n_trees");
        }
        for (; walked < cut; ++walked) {
            ones += static_cast<std::size_t>(trees_[walked].predict(row));
        }
        out.push_back(2 * ones > cut ? 1 : 0);
    }
    return out;
}

std::vector<double> RandomForestModel::feature_importance() const {
    if (!fitted_) model_error("model is not fitted");
    std::vector<double> importance(n_features_, 0.0);
    for (const Tree& tree : trees_) {
        const double root_total =
            static_cast<double>(tree.nodes[0].n0) + static_cast<double>(tree.nodes[0].n1);
        for (const TreeNode& node : tree.nodes) {
            if (node.is_leaf()) continue;
            const TreeNode& l = tree.nodes[static_cast<std::size_t>(node.left)];
            const TreeNode& r = tree.nodes[static_cast<std::size_t>(node.right)];
            const double node_n = static_cast<double>(node.n0) + static_cast<double>(node.n1);
            const double child_gini =
                (static_cast<double>(l.n0 + l.n1) * gini(l.n0, l.n1) +
                 static_cast<double>(r.n0 + r.n1) * gini(r.n0, r.n1)) /
                node_n;
            importance[static_cast<std::size_t>(node.feature)] +=
                node_n / root_total * (gini(node.n0, node.n1) - child_gini);
        }
    }
    double total = 0.0;
    for (double& v : importance) {
        v /= static_cast<double>(trees_.size());
        total += v;
    }
    if (total > 0.0) {
        for (double& v : importance) v /= total;
    } else {
        const double uniform = 1.0 / static_cast<double>(n_features_);
        for (double& v : importance) v = uniform;
    }
    return importance;
}

RandomForestModel RandomForestModel::restore(ForestConfig config, std::vector<Tree> trees,
                                             std::vector<std::uint64_t> per_tree_seeds,
                                             bool single_class_warning,
                                             std::size_t n_features) {
    RandomForestModel model(std::move(config));
    model.trees_ = std::move(trees);
    model.per_tree_seeds_ = std::move(per_tree_seeds);
    model.single_class_warning_ = single_class_warning;
    model.n_features_ = n_features;
    model.fitted_ = true;
    return model;
}

}  // namespace heartml
