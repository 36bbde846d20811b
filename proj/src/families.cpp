#include "heartml/families.hpp"

#include <algorithm>

#include "heartml/error.hpp"

namespace heartml {

namespace {

[[noreturn]] void unknown_param(const std::string& family, const std::string& name) {
    throw Error(Stage::Tuning, ErrorKind::Config,
                "unknown " + family + " parameter \"" + name + "\"");
}

std::size_t positive_size(const Candidate& params, const std::string& name) {
    const std::int64_t v = param_as_int(params, name);
    if (v < 1) {
        throw Error(Stage::Tuning, ErrorKind::Config,
                    "parameter \"" + name + "\" must be >= 1");
    }
    return static_cast<std::size_t>(v);
}

}  // namespace

std::unique_ptr<Classifier> LogRegFamily::make(const Candidate& params) const {
    LogRegConfig config = base_;
    for (const auto& [name, value] : params) {
        (void)value;
        if (name == "l2_lambda") {
            config.l2_lambda = param_as_real(params, name);
        } else if (name == "max_iter") {
            config.max_iter = positive_size(params, name);
        } else if (name == "tol") {
            config.tol = param_as_real(params, name);
        } else if (name == "learning_rate") {
            config.learning_rate = param_as_real(params, name);
        } else {
            unknown_param("logreg", name);
        }
    }
    return std::make_unique<LogRegModel>(config);
}

std::unique_ptr<Classifier> KnnFamily::make(const Candidate& params) const {
    std::size_t k = default_k_;
    for (const auto& [name, value] : params) {
        (void)value;
        if (name == "k") {
            k = positive_size(params, name);
        } else {
            unknown_param("knn", name);
        }
    }
    return std::make_unique<KnnModel>(k);
}

ForestConfig ForestFamily::config_from(const Candidate& params) const {
    ForestConfig config = base_;
    for (const auto& [name, value] : params) {
        (void)value;
        if (name == "n_trees") {
            config.n_trees = positive_size(params, name);
        } else if (name == "max_depth") {
            const auto depth = param_as_opt_int(params, name);
            if (depth && *depth < 0) {
                throw Error(Stage::Tuning, ErrorKind::Config, "max_depth must be >= 0 or null");
            }
            config.max_depth =
                depth ? std::optional<std::size_t>(static_cast<std::size_t>(*depth))
                      : std::nullopt;
        } else if (name == "min_samples_split") {
            config.min_samples_split = positive_size(params, name);
        } else if (name == "min_samples_leaf") {
            config.min_samples_leaf = positive_size(params, name);
        } else if (name == "max_features") {
            config.max_features = positive_size(params, name);
        } else {
            unknown_param("forest", name);
        }
    }
    return config;
}

std::unique_ptr<Classifier> ForestFamily::make(const Candidate& params) const {
    return std::make_unique<RandomForestModel>(config_from(params));
}

std::string ForestFamily::group_key(const Candidate& params) const {
    bool has_n_trees = false;
    std::string key;
    for (const auto& [name, value] : params) {
        if (name == "n_trees") {
            has_n_trees = true;
            continue;
        }
        key += name + "=" + param_value_to_string(value) + "|";
    }
    // Without an n_trees axis there is nothing to share.
    return has_n_trees ? key : std::string{};
}

std::vector<double> ForestFamily::score_group(const std::vector<Candidate>& group,
                                              const Matrix& train_x,
                                              const std::vector<int>& train_y,
                                              const Matrix& test_x,
                                              const std::vector<int>& test_y) const {
    std::vector<std::size_t> sizes(group.size());
    std::size_t largest = 0;
    for (std::size_t i = 0; i < group.size(); ++i) {
        sizes[i] = positive_size(group[i], "n_trees");
        if (sizes[i] > sizes[largest]) largest = i;
    }

    RandomForestModel model(config_from(group[largest]));
    model.fit(train_x, train_y);

    std::vector<std::size_t> order(group.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&sizes](std::size_t a, std::size_t b) { return sizes[a] < sizes[b]; });

    // Walk tree-outer so each tree stays hot while it votes on every row;
    // a snapshot of the running votes at cut c is exactly the prediction
    // of the forest fitted with n_trees = c.
    std::vector<std::size_t> ones(test_x.rows, 0);
    std::vector<double> scores(group.size());
    std::size_t cut_index = 0;
    for (std::size_t t = 0; t < sizes[largest] && cut_index < order.size(); ++t) {
        const Tree& tree = model.trees()[t];
        for (std::size_t r = 0; r < test_x.rows; ++r) {
            ones[r] += static_cast<std::size_t>(tree.predict(test_x.row(r)));
        }
        while (cut_index < order.size() && sizes[order[cut_index]] == t + 1) {
            std::size_t correct = 0;
            for (std::size_t r = 0; r < test_x.rows; ++r) {
                const int pred = 2 * ones[r] > t + 1 ? 1 : 0;
                if (pred == test_y[r]) ++correct;
            }
            scores[order[cut_index]] =
                static_cast<double>(correct) / static_cast<double>(test_x.rows);
            ++cut_index;
        }
    }
    return scores;
}

std::unique_ptr<ModelFamilyOps> make_family_ops(ModelFamily family, std::uint64_t seed) {
    switch (family) {
        case ModelFamily::LogReg:
            return std::make_unique<LogRegFamily>();
        case ModelFamily::Knn:
            return std::make_unique<KnnFamily>();
        case ModelFamily::Forest: {
            ForestConfig base;
            base.seed = seed;
            return std::make_unique<ForestFamily>(base);
        }
    }
    throw Error(Stage::Config, ErrorKind::Config, "unhandled model family");
}

}  // namespace heartml
