#include "heartml/model_io.hpp"

#include <cstdio>
#include <fstream>

#include "heartml/error.hpp"
#include "heartml/forest.hpp"
#include "heartml/knn.hpp"
#include "heartml/logistic.hpp"

namespace heartml {

namespace {

using nlohmann::json;

[[noreturn]] void io_error(const std::string& msg) {
    throw Error(Stage::Io, ErrorKind::Io, msg);
}

[[noreturn]] void format_error(const std::string& msg) {
    throw Error(Stage::Model, ErrorKind::Validation, msg);
}

json tree_to_json(const Tree& tree, std::size_t node_index) {
    const TreeNode& node = tree.nodes[node_index];
    json j;
    j["n0"] = node.n0;
    j["n1"] = node.n1;
    if (node.is_leaf()) {
        j["kind"] = "leaf";
    } else {
        j["kind"] = "split";
        j["feature"] = node.feature;
        j["threshold"] = node.threshold;
        j["left"] = tree_to_json(tree, static_cast<std::size_t>(node.left));
        j["right"] = tree_to_json(tree, static_cast<std::size_t>(node.right));
    }
    return j;
}

// Rebuild in the growth order: parent first, left subtree before right.
std::int32_t tree_from_json(const json& j, Tree& tree) {
    const auto index = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{});
    tree.nodes[static_cast<std::size_t>(index)].n0 = j.at("n0").get<std::uint32_t>();
    tree.nodes[static_cast<std::size_t>(index)].n1 = j.at("n1").get<std::uint32_t>();
    if (j.at("kind") == "split") {
        tree.nodes[static_cast<std::size_t>(index)].feature = j.at("feature").get<int>();
        tree.nodes[static_cast<std::size_t>(index)].threshold = j.at("threshold").get<double>();
        const std::int32_t left = tree_from_json(j.at("left"), tree);
        tree.nodes[static_cast<std::size_t>(index)].left = left;
        const std::int32_t right = tree_from_json(j.at("right"), tree);
        tree.nodes[static_cast<std::size_t>(index)].right = right;
    }
    return index;
}

json forest_config_to_json(const ForestConfig& config) {
    json j;
    j["n_trees"] = config.n_trees;
    j["max_depth"] = config.max_depth ? json(*config.max_depth) : json(nullptr);
    j["min_samples_split"] = config.min_samples_split;
    j["min_samples_leaf"] = config.min_samples_leaf;
    j["max_features"] = config.max_features;
    j["seed"] = config.seed;
    j["bootstrap"] = config.bootstrap;
    return j;
}

ForestConfig forest_config_from_json(const json& j) {
    ForestConfig config;
    config.n_trees = j.at("n_trees").get<std::size_t>();
    config.max_depth = j.at("max_depth").is_null()
                           ? std::nullopt
                           : std::optional<std::size_t>(j.at("max_depth").get<std::size_t>());
    config.min_samples_split = j.at("min_samples_split").get<std::size_t>();
    config.min_samples_leaf = j.at("min_samples_leaf").get<std::size_t>();
    config.max_features = j.at("max_features").get<std::size_t>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.bootstrap = j.at("bootstrap").get<bool>();
    return config;
}

}  // namespace

json pipeline_to_json(const PipelineParams& pipeline) {
    json j;
    j["imputer"]["medians"] = pipeline.imputer.medians;
    j["imputer"]["fitted_on"] = pipeline.imputer.fitted_on;
    j["scaler"]["means"] = pipeline.scaler.means;
    j["scaler"]["stds"] = pipeline.scaler.stds;
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(pipeline.schema_fingerprint));
    j["schema_fingerprint"] = buf;
    return j;
}

PipelineParams pipeline_from_json(const json& j) {
    PipelineParams pipeline;
    pipeline.imputer.medians = j.at("imputer").at("medians").get<std::vector<double>>();
    pipeline.imputer.fitted_on = j.at("imputer").at("fitted_on").get<std::size_t>();
    pipeline.scaler.means = j.at("scaler").at("means").get<std::vector<double>>();
    pipeline.scaler.stds = j.at("scaler").at("stds").get<std::vector<double>>();
    pipeline.schema_fingerprint =
        std::stoull(j.at("schema_fingerprint").get<std::string>(), nullptr, 16);
    return pipeline;
}

json model_payload(const Classifier& model, ModelFamily family) {
    json j;
    switch (family) {
        case ModelFamily::LogReg: {
            const auto& m = dynamic_cast<const LogRegModel&>(model);
            j["weights"] = m.weights();
            j["bias"] = m.bias();
            j["config"]["l2_lambda"] = m.config().l2_lambda;
            j["config"]["max_iter"] = m.config().max_iter;
            j["config"]["tol"] = m.config().tol;
            j["config"]["learning_rate"] = m.config().learning_rate;
            j["converged"] = m.converged();
            j["iterations_run"] = m.iterations_run();
            break;
        }
        case ModelFamily::Knn: {
            const auto& m = dynamic_cast<const KnnModel&>(model);
            j["k"] = m.k();
            j["labels"] = m.train_labels();
            j["row_ids"] = m.train_row_ids();
            json rows = json::array();
            for (std::size_t r = 0; r < m.train_features().rows; ++r) {
                const auto row = m.train_features().row(r);
                rows.push_back(std::vector<double>(row.begin(), row.end()));
            }
            j["features"] = std::move(rows);
            break;
        }
        case ModelFamily::Forest: {
            const auto& m = dynamic_cast<const RandomForestModel&>(model);
            j["config"] = forest_config_to_json(m.config());
            j["per_tree_seeds"] = m.per_tree_seeds();
            j["single_class_warning"] = m.single_class_warning();
            j["n_features"] = m.n_features();
            json trees = json::array();
            for (const Tree& tree : m.trees()) {
                trees.push_back(tree_to_json(tree, 0));
            }
            j["trees"] = std::move(trees);
            break;
        }
    }
    return j;
}

std::unique_ptr<Classifier> model_from_payload(ModelFamily family, const json& j) {
    switch (family) {
        case ModelFamily::LogReg: {
            LogRegConfig config;
            config.l2_lambda = j.at("config").at("l2_lambda").get<double>();
            config.max_iter = j.at("config").at("max_iter").get<std::size_t>();
            config.tol = j.at("config").at("tol").get<double>();
            config.learning_rate = j.at("config").at("learning_rate").get<double>();
            return std::make_unique<LogRegModel>(LogRegModel::restore(
                config, j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>(),
                j.at("iterations_run").get<std::size_t>(), j.at("converged").get<bool>()));
        }
        case ModelFamily::Knn: {
            const auto labels = j.at("labels").get<std::vector<int>>();
            auto row_ids = j.at("row_ids").get<std::vector<std::int64_t>>();
            const auto& rows = j.at("features");
            Matrix features(rows.size(), rows.empty() ? 0 : rows[0].size());
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const auto row = rows[r].get<std::vector<double>>();
                std::copy(row.begin(), row.end(), features.row(r).begin());
            }
            auto model = std::make_unique<KnnModel>(j.at("k").get<std::size_t>());
            model->fit(features, labels, std::move(row_ids));
            return model;
        }
        case ModelFamily::Forest: {
            std::vector<Tree> trees;
            for (const auto& tj : j.at("trees")) {
                Tree tree;
                tree_from_json(tj, tree);
                trees.push_back(std::move(tree));
            }
            return std::make_unique<RandomForestModel>(RandomForestModel::restore(
                forest_config_from_json(j.at("config")),
                std::move(trees), j.at("per_tree_seeds").get<std::vector<std::uint64_t>>(),
                j.at("single_class_warning").get<bool>(),
                j.at("n_features").get<std::size_t>()));
        }
    }
    format_error("unhandled model family in payload");
}

json build_model_file(ModelFamily family, const PipelineParams& pipeline, const json& payload,
                      const TrainingMeta& meta, const FeatureSchema& schema) {
    json j;
    j["format_version"] = kModelFormatVersion;
    j["family"] = family_name(family);
    j["schema_fingerprint"] = schema.fingerprint_hex();
    j["pipeline"] = pipeline_to_json(pipeline);
    j["model"] = payload;
    j["training"]["seed"] = meta.seed;
    j["training"]["test_fraction"] = meta.test_fraction;
    j["training"]["dataset_rows"] = meta.dataset_rows;
    j["training"]["timestamp"] = meta.timestamp ? json(*meta.timestamp) : json(nullptr);
    return j;
}

LoadedModel load_model_file(const std::filesystem::path& path, const FeatureSchema& expected) {
    const json doc = read_json_file(path);
    if (!doc.contains("format_version") || !doc.at("format_version").is_number_integer()) {
        format_error("model file has no format_version");
    }
    if (doc.at("format_version").get<int>() != kModelFormatVersion) {
        format_error("unsupported model format_version " +
                     doc.at("format_version").dump() + " (expected " +
                     std::to_string(kModelFormatVersion) + ")");
    }
    if (doc.at("schema_fingerprint").get<std::string>() != expected.fingerprint_hex()) {
        format_error("schema fingerprint mismatch: model was trained for a different "
                     "column layout (got " + doc.at("schema_fingerprint").get<std::string>() +
                     ", expected " + expected.fingerprint_hex() + ")");
    }

    LoadedModel loaded;
    loaded.family = family_from_name(doc.at("family").get<std::string>());
    loaded.pipeline = pipeline_from_json(doc.at("pipeline"));
    loaded.model = model_from_payload(loaded.family, doc.at("model"));
    loaded.meta.seed = doc.at("training").at("seed").get<std::uint64_t>();
    loaded.meta.test_fraction = doc.at("training").at("test_fraction").get<double>();
    loaded.meta.dataset_rows = doc.at("training").at("dataset_rows").get<std::size_t>();
    if (!doc.at("training").at("timestamp").is_null()) {
        loaded.meta.timestamp = doc.at("training").at("timestamp").get<std::string>();
    }
    return loaded;
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) io_error("cannot write file: " + path.string());
    out << doc.dump(2) << '\n';
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) io_error("cannot open file: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw Error(Stage::Io, ErrorKind::Validation,
                    "invalid JSON in " + path.string() + ": " + e.what());
    }
    return doc;
}

json report_to_json(const ClassReport& report) {
    json j;
    for (std::size_t c = 0; c < 2; ++c) {
        const ClassMetrics& m = report.per_class[c];
        json& cj = j["classes"][c == 0 ? "0" : "1"];
        cj["precision"] = m.precision;
        cj["recall"] = m.recall;
        cj["f1"] = m.f1;
        cj["support"] = m.support;
    }
    j["accuracy"] = report.accuracy;
    j["macro"] = {{"precision", report.macro_precision},
                  {"recall", report.macro_recall},
                  {"f1", report.macro_f1}};
    j["weighted"] = {{"precision", report.weighted_precision},
                     {"recall", report.weighted_recall},
                     {"f1", report.weighted_f1}};
    j["total_support"] = report.total_support;
    return j;
}

}  // namespace heartml
