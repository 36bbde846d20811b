// heartml: train, tune, evaluate and run the heart-disease classifiers
// from the command line, with every stochastic step pinned to --seed.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "heartml/dataset.hpp"
#include "heartml/error.hpp"
#include "heartml/families.hpp"
#include "heartml/forest.hpp"
#include "heartml/knn.hpp"
#include "heartml/logistic.hpp"
#include "heartml/metrics.hpp"
#include "heartml/model_io.hpp"
#include "heartml/preprocess.hpp"
#include "heartml/tuning.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace heartml;

namespace {

struct CommonOpts {
    std::string data_path;
    std::uint64_t seed = 42;
    double test_fraction = 0.2;
    std::string out_dir = ".";
    std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
};

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

void write_text_file(const std::string& text, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(Stage::Io, ErrorKind::Io, "cannot write file: " + path.string());
    out << text;
}

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw Error(Stage::Io, ErrorKind::Io, "cannot create output directory: " + dir);
    return p;
}

Dataset load_heart(const std::string& path) {
    return load_csv(path, FeatureSchema::heart());
}

std::unique_ptr<Classifier> make_default_model(ModelFamily family, std::uint64_t seed,
                                               std::size_t threads) {
    switch (family) {
        case ModelFamily::LogReg: return std::make_unique<LogRegModel>();
        case ModelFamily::Knn: return std::make_unique<KnnModel>(5);
        case ModelFamily::Forest: {
            ForestConfig config;
            config.seed = seed;
            auto model = std::make_unique<RandomForestModel>(config);
            model->set_threads(threads);
            return model;
        }
    }
    throw Error(Stage::Config, ErrorKind::Config, "unhandled family");
}

std::string confusion_csv(const ConfusionMatrix& cm) {
    std::string out = "true,predicted,count\n";
    for (int t = 0; t < 2; ++t) {
        for (int p = 0; p < 2; ++p) {
            out += std::to_string(t) + "," + std::to_string(p) + "," +
                   std::to_string(cm.counts[t][p]) + "\n";
        }
    }
    return out;
}

std::string roc_csv(const RocCurve& curve) {
    std::string out = "fpr,tpr\n";
    for (const auto& [fpr, tpr] : curve.points) {
        out += format_double(fpr) + "," + format_double(tpr) + "\n";
    }
    return out;
}

/// Score a transformed test set and write report.txt/report.json,
/// confusion.csv and roc.csv into the output directory.
ClassReport evaluate_to_dir(const Classifier& model, const Dataset& test_transformed,
                            const fs::path& out) {
    std::vector<int> predictions;
    std::vector<double> scores;
    predictions.reserve(test_transformed.size());
    scores.reserve(test_transformed.size());
    for (std::size_t r = 0; r < test_transformed.size(); ++r) {
        predictions.push_back(model.predict(test_transformed.features.row(r)));
        scores.push_back(model.predict_proba(test_transformed.features.row(r)));
    }

    const ConfusionMatrix cm = confusion(test_transformed.target, predictions);
    const ClassReport report = class_report(cm);
    write_text_file(render_report(report), out / "report.txt");
    write_json_file(report_to_json(report), out / "report.json");
    write_text_file(confusion_csv(cm), out / "confusion.csv");
    const RocCurve roc = roc_points(test_transformed.target, scores);
    json roc_meta;
    roc_meta["auc"] = roc.auc;
    write_text_file(roc_csv(roc), out / "roc.csv");
    write_json_file(roc_meta, out / "roc_auc.json");
    return report;
}

int cmd_train(const CommonOpts& opts, const std::string& family_name_str, bool stamp) {
    const ModelFamily family = family_from_name(family_name_str);
    const fs::path out = ensure_out_dir(opts.out_dir);

    const Dataset ds = load_heart(opts.data_path);
    const SplitIndices split = train_test_split(ds, opts.test_fraction, opts.seed);
    const Dataset train = ds.subset(split.train_rows);
    const Dataset test = ds.subset(split.test_rows);

    const PipelineParams pipeline = fit_pipeline(train);
    const Dataset train_t = apply_pipeline(pipeline, train);
    const Dataset test_t = apply_pipeline(pipeline, test);

    auto model = make_default_model(family, opts.seed, opts.threads);
    model->fit(train_t.features, train_t.target);

    TrainingMeta meta;
    meta.seed = opts.seed;
    meta.test_fraction = opts.test_fraction;
    meta.dataset_rows = ds.size();
    if (stamp) meta.timestamp = utc_timestamp();

    const fs::path model_path = out / (family_name_str + "_model.json");
    write_json_file(
        build_model_file(family, pipeline, model_payload(*model, family), meta, ds.schema),
        model_path);

    const ClassReport report = evaluate_to_dir(*model, test_t, out);
    std::cout << render_report(report);
    std::cout << "\ntrained " << family_name_str << " on " << train.size() << " rows, tested on "
              << test.size() << " rows (seed " << opts.seed << ")\n"
              << "model file: " << model_path.string() << "\n";
    return 0;
}

ParamGrid grid_from_json(const json& params) {
    if (!params.is_object() || params.empty()) {
        throw Error(Stage::Tuning, ErrorKind::Config,
                    "grid file key \"params\" must be a non-empty object");
    }
    ParamGrid grid;
    for (const auto& [name, values] : params.items()) {
        if (!values.is_array() || values.empty()) {
            throw Error(Stage::Tuning, ErrorKind::Config,
                        "grid file parameter \"" + name + "\" must be a non-empty array");
        }
        std::vector<ParamValue> list;
        for (const auto& v : values) {
            if (v.is_null()) {
                list.emplace_back(std::monostate{});
            } else if (v.is_number_integer()) {
                list.emplace_back(v.get<std::int64_t>());
            } else if (v.is_number_float()) {
                list.emplace_back(v.get<double>());
            } else {
                throw Error(Stage::Tuning, ErrorKind::Config,
                            "grid file parameter \"" + name +
                                "\" has a non-numeric, non-null entry: " + v.dump());
            }
        }
        grid.entries.emplace_back(name, std::move(list));
    }
    return grid;
}

int cmd_tune(CommonOpts opts, std::string family_name_str, const std::string& grid_path,
             std::size_t n_iter, bool n_iter_set, std::size_t cv_k, bool cv_k_set,
             bool seed_set, bool stamp) {
    json grid_doc;
    ParamGrid grid;
    bool have_grid_file = !grid_path.empty();
    if (have_grid_file) {
        grid_doc = read_json_file(grid_path);
        if (!grid_doc.is_object()) {
            throw Error(Stage::Tuning, ErrorKind::Config, "grid file must hold a JSON object");
        }
        if (grid_doc.contains("family")) {
            const auto file_family = grid_doc.at("family").get<std::string>();
            if (family_name_str.empty()) {
                family_name_str = file_family;
            } else if (family_name_str != file_family) {
                throw Error(Stage::Tuning, ErrorKind::Config,
                            "grid file family \"" + file_family + "\" conflicts with --family " +
                                family_name_str);
            }
        }
        if (!grid_doc.contains("params")) {
            throw Error(Stage::Tuning, ErrorKind::Config, "grid file is missing key \"params\"");
        }
        grid = grid_from_json(grid_doc.at("params"));
        // Explicit flags win over grid-file keys, which win over defaults.
        if (!n_iter_set && grid_doc.contains("n_iter")) {
            n_iter = grid_doc.at("n_iter").get<std::size_t>();
        }
        if (!cv_k_set && grid_doc.contains("cv_k")) {
            cv_k = grid_doc.at("cv_k").get<std::size_t>();
        }
        if (!seed_set && grid_doc.contains("seed")) {
            opts.seed = grid_doc.at("seed").get<std::uint64_t>();
        }
    }
    if (family_name_str.empty()) {
        throw Error(Stage::Config, ErrorKind::Config,
                    "specify --family or a grid file with a \"family\" key");
    }
    const ModelFamily family = family_from_name(family_name_str);
    if (!have_grid_file) grid = default_grid(family);

    const fs::path out = ensure_out_dir(opts.out_dir);
    const Dataset ds = load_heart(opts.data_path);
    const SplitIndices split = train_test_split(ds, opts.test_fraction, opts.seed);
    const Dataset train = ds.subset(split.train_rows);
    const Dataset test = ds.subset(split.test_rows);

    const auto ops = make_family_ops(family, opts.seed);
    const CvConfig cv{cv_k, opts.seed};
    const SearchResult result =
        n_iter > 0 ? randomized_search(*ops, grid, n_iter, train, cv, opts.seed, opts.threads)
                   : grid_search(*ops, grid, train, cv, opts.threads);

    write_text_file(candidates_csv(result, cv.k), out / "candidates.csv");

    TrainingMeta meta;
    meta.seed = opts.seed;
    meta.test_fraction = opts.test_fraction;
    meta.dataset_rows = ds.size();
    if (stamp) meta.timestamp = utc_timestamp();
    const fs::path model_path = out / (family_name_str + "_model.json");
    write_json_file(build_model_file(family, result.best_pipeline,
                                     model_payload(*result.best_model, family), meta, ds.schema),
                    model_path);

    const Dataset test_t = apply_pipeline(result.best_pipeline, test);
    const ClassReport report = evaluate_to_dir(*result.best_model, test_t, out);

    std::cout << render_report(report) << "\n";
    std::cout << "evaluated " << result.candidates.size() << " candidates ("
              << (n_iter > 0 ? "randomized" : "grid") << " search, " << cv.k << "-fold CV)\n";
    std::cout << "best:";
    for (const auto& [name, value] : result.best_params) {
        std::cout << " " << name << "=" << param_value_to_string(value);
    }
    const CandidateResult& best = result.candidates[result.best_index];
    std::cout << "\nbest mean CV accuracy: " << format_double(best.mean_score)
              << "\nheld-out test accuracy: " << format_double(report.accuracy)
              << "\nmodel file: " << model_path.string()
              << "\ncandidate table: " << (out / "candidates.csv").string() << "\n";
    return 0;
}

int cmd_evaluate(const CommonOpts& opts, const std::string& model_path,
                 std::optional<std::uint64_t> seed_override,
                 std::optional<double> fraction_override) {
    const LoadedModel loaded = load_model_file(model_path, FeatureSchema::heart());
    const Dataset ds = load_heart(opts.data_path);

    const std::uint64_t seed = seed_override.value_or(loaded.meta.seed);
    const double fraction = fraction_override.value_or(loaded.meta.test_fraction);
    const SplitIndices split = train_test_split(ds, fraction, seed);
    const Dataset test = ds.subset(split.test_rows);
    const Dataset test_t = apply_pipeline(loaded.pipeline, test);

    const fs::path out = ensure_out_dir(opts.out_dir);
    const ClassReport report = evaluate_to_dir(*loaded.model, test_t, out);
    std::cout << render_report(report);
    std::cout << "\nevaluated " << family_name(loaded.family) << " model on " << test.size()
              << " held-out rows (seed " << seed << ", test fraction " << format_double(fraction)
              << ")\n";
    return 0;
}

struct PredictRow {
    std::vector<double> values;  // 13 predictors, NaN = missing
};

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim_cell(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

/// Parse one 13-value predictor row, enforcing the coded ranges.
PredictRow parse_predict_row(const std::vector<std::string>& cells,
                             const FeatureSchema& schema) {
    const std::size_t p = schema.predictor_count();
    if (cells.size() != p) {
        throw Error(Stage::Data, ErrorKind::Validation,
                    "expected " + std::to_string(p) + " predictor values, got " +
                        std::to_string(cells.size()));
    }
    PredictRow row;
    row.values.reserve(p);
    for (std::size_t c = 0; c < p; ++c) {
        const ColumnSpec& col = schema.columns[c];
        const std::string cell = trim_cell(cells[c]);
        if (cell.empty() || cell == "?") {
            row.values.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        double value;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
            throw Error(Stage::Data, ErrorKind::Validation,
                        "column \"" + col.name + "\": cannot parse \"" + cell + "\"");
        }
        if (col.kind == ValueKind::Coded &&
            (value != std::floor(value) || value < col.code_min || value > col.code_max)) {
            throw Error(Stage::Data, ErrorKind::Validation,
                        "column \"" + col.name + "\": value " + cell + " outside coded range [" +
                            std::to_string(col.code_min) + ", " + std::to_string(col.code_max) +
                            "]");
        }
        row.values.push_back(value);
    }
    return row;
}

std::vector<double> transform_row(const PipelineParams& pipeline, std::vector<double> values) {
    for (std::size_t c = 0; c < values.size(); ++c) {
        if (std::isnan(values[c])) values[c] = pipeline.imputer.medians[c];
        values[c] = pipeline.scaler.stds[c] == 0.0
                        ? 0.0
                        : (values[c] - pipeline.scaler.means[c]) / pipeline.scaler.stds[c];
    }
    return values;
}

int cmd_predict(const std::string& model_path, const std::string& input_path,
                const std::string& inline_row) {
    const FeatureSchema schema = FeatureSchema::heart();
    const LoadedModel loaded = load_model_file(model_path, schema);

    // Each entry: (label for diagnostics, raw cells)
    std::vector<std::vector<std::string>> pending;
    if (!inline_row.empty()) {
        pending.push_back(split_cells(inline_row));
    } else {
        std::ifstream in(input_path);
        if (!in) {
            throw Error(Stage::Data, ErrorKind::Io, "cannot open input file: " + input_path);
        }
        std::string line;
        if (!std::getline(in, line)) {
            throw Error(Stage::Data, ErrorKind::Validation, "input file is empty");
        }
        auto header = split_cells(line);
        const auto names = schema.predictor_names();
        const bool with_target = header.size() == schema.columns.size();
        if (header.size() != names.size() && !with_target) {
            throw Error(Stage::Data, ErrorKind::Validation,
                        "input header must list the 13 predictor columns (target optional)");
        }
        for (std::size_t c = 0; c < names.size(); ++c) {
            if (trim_cell(header[c]) != names[c]) {
                throw Error(Stage::Data, ErrorKind::Validation,
                            "input header mismatch at column " + std::to_string(c + 1) +
                                ": got \"" + trim_cell(header[c]) + "\", expected \"" + names[c] +
                                "\"");
            }
        }
        while (std::getline(in, line)) {
            if (trim_cell(line).empty()) continue;
            auto cells = split_cells(line);
            if (with_target && cells.size() == schema.columns.size()) {
                cells.pop_back();  // target column ignored at inference time
            }
            pending.push_back(std::move(cells));
        }
    }

    std::cout << "row_id,prediction,probability\n";
    std::size_t failures = 0;
    for (std::size_t i = 0; i < pending.size(); ++i) {
        try {
            const PredictRow row = parse_predict_row(pending[i], schema);
            const auto transformed = transform_row(loaded.pipeline, row.values);
            const int label = loaded.model->predict(transformed);
            const double proba = loaded.model->predict_proba(transformed);
            std::cout << i << "," << label << "," << format_double(proba) << "\n";
        } catch (const Error& e) {
            std::cerr << "row " << i << ": " << e.what() << "\n";
            ++failures;
        }
    }
    if (failures > 0) {
        std::cerr << failures << " of " << pending.size() << " rows failed validation\n";
        return 1;
    }
    return 0;
}

int cmd_report(const CommonOpts& opts) {
    const fs::path out = ensure_out_dir(opts.out_dir);
    const Dataset ds = load_heart(opts.data_path);
    const FeatureSchema& schema = ds.schema;

    // (a) age vs thalach scatter, one point per dataset row
    {
        std::string csv = "age,thalach,target\n";
        const auto names = schema.predictor_names();
        const auto age_col = static_cast<std::size_t>(
            std::find(names.begin(), names.end(), "age") - names.begin());
        const auto hr_col = static_cast<std::size_t>(
            std::find(names.begin(), names.end(), "thalach") - names.begin());
        for (std::size_t r = 0; r < ds.size(); ++r) {
            csv += format_double(ds.features.at(r, age_col)) + "," +
                   format_double(ds.features.at(r, hr_col)) + "," +
                   std::to_string(ds.target[r]) + "\n";
        }
        write_text_file(csv, out / "fig1_age_thalach_scatter.csv");
    }

    // (b) logistic-regression coefficients on the full standardized dataset
    {
        const PipelineParams pipeline = fit_pipeline(ds);
        const Dataset full_t = apply_pipeline(pipeline, ds);
        LogRegModel logreg;
        logreg.fit(full_t.features, full_t.target);
        std::string csv = "feature,weight\n";
        for (const auto& [name, weight] : logreg.coefficients(schema)) {
            csv += name + "," + format_double(weight) + "\n";
        }
        write_text_file(csv, out / "fig3_logreg_coefficients.csv");
    }

    const SplitIndices split = train_test_split(ds, opts.test_fraction, opts.seed);
    const Dataset train = ds.subset(split.train_rows);
    const Dataset test = ds.subset(split.test_rows);
    const PipelineParams pipeline = fit_pipeline(train);
    const Dataset train_t = apply_pipeline(pipeline, train);
    const Dataset test_t = apply_pipeline(pipeline, test);

    // (c) three-model test accuracy with default settings
    {
        std::string csv = "model,test_accuracy\n";
        for (const char* name : {"knn", "logreg", "forest"}) {
            auto model = make_default_model(family_from_name(name), opts.seed, opts.threads);
            model->fit(train_t.features, train_t.target);
            csv += std::string(name) + "," +
                   format_double(score_accuracy(*model, test_t.features, test_t.target)) + "\n";
        }
        write_text_file(csv, out / "fig4_model_comparison.csv");
    }

    // (d) k sweep 1..20
    const KSweepResult sweep =
        k_sweep(train_t.features, train_t.target, test_t.features, test_t.target, 20);
    {
        std::string csv = "k,train_score,test_score\n";
        for (std::size_t i = 0; i < sweep.ks.size(); ++i) {
            csv += std::to_string(sweep.ks[i]) + "," + format_double(sweep.train_scores[i]) +
                   "," + format_double(sweep.test_scores[i]) + "\n";
        }
        write_text_file(csv, out / "fig5_k_sweep.csv");
    }

    // (e) confusion matrix of the sweep-best KNN (highest test score,
    // smaller k on ties) on the held-out rows
    {
        std::size_t best = 0;
        for (std::size_t i = 1; i < sweep.ks.size(); ++i) {
            if (sweep.test_scores[i] > sweep.test_scores[best]) best = i;
        }
        KnnModel knn(sweep.ks[best]);
        knn.fit(train_t.features, train_t.target);
        std::vector<int> predictions;
        predictions.reserve(test_t.size());
        for (std::size_t r = 0; r < test_t.size(); ++r) {
            predictions.push_back(knn.predict(test_t.features.row(r)));
        }
        const ConfusionMatrix cm = confusion(test_t.target, predictions);
        std::string csv = confusion_csv(cm);
        csv += "# knn k=" + std::to_string(sweep.ks[best]) + "\n";
        write_text_file(csv, out / "fig6_knn_confusion.csv");
    }

    std::cout << "figure data written to " << out.string() << ":\n"
              << "  fig1_age_thalach_scatter.csv\n"
              << "  fig3_logreg_coefficients.csv\n"
              << "  fig4_model_comparison.csv\n"
              << "  fig5_k_sweep.csv\n"
              << "  fig6_knn_confusion.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heart-disease classification toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string family;
    std::string model_path;
    std::string grid_path;
    std::string input_path;
    std::string inline_row;
    std::size_t n_iter = 0;
    std::size_t cv_k = 5;
    bool stamp = false;
    std::optional<std::uint64_t> seed_override;
    std::optional<double> fraction_override;

    CLI::Option* tune_seed_opt = nullptr;
    auto add_common = [&](CLI::App* cmd, bool needs_data) {
        auto* data = cmd->add_option("--data", opts.data_path, "dataset CSV path");
        if (needs_data) data->required();
        auto* seed = cmd->add_option("--seed", opts.seed, "RNG seed (default 42)");
        if (cmd->get_name() == "tune") tune_seed_opt = seed;
        cmd->add_option("--test-fraction", opts.test_fraction,
                        "held-out fraction (default 0.2)");
        cmd->add_option("--out", opts.out_dir, "output directory (default .)");
        cmd->add_option("--threads", opts.threads, "worker threads (default: hardware)");
    };

    auto* train = app.add_subcommand("train", "fit one family with default settings");
    add_common(train, true);
    train->add_option("--family", family, "logreg | knn | forest")->required();
    train->add_flag("--stamp", stamp, "embed a wall-clock timestamp in the model file");

    auto* tune = app.add_subcommand("tune", "grid / randomized hyperparameter search");
    add_common(tune, true);
    tune->add_option("--family", family, "logreg | knn | forest");
    tune->add_option("--grid", grid_path, "JSON grid file (defaults per family)");
    auto* n_iter_opt =
        tune->add_option("--n-iter", n_iter, "randomized-search draws (0 = full grid)");
    auto* cv_k_opt = tune->add_option("--cv-k", cv_k, "cross-validation folds (default 5)");
    tune->add_flag("--stamp", stamp, "embed a wall-clock timestamp in the model file");

    auto* evaluate = app.add_subcommand("evaluate", "score a saved model on the held-out split");
    add_common(evaluate, true);
    evaluate->add_option("--model", model_path, "model file from train/tune")->required();
    std::uint64_t seed_ov = 0;
    double fraction_ov = 0.0;
    auto* seed_ov_opt = evaluate->add_option("--split-seed", seed_ov,
                                             "override the stored split seed");
    auto* frac_ov_opt = evaluate->add_option("--split-fraction", fraction_ov,
                                             "override the stored test fraction");

    auto* predict = app.add_subcommand("predict", "classify new rows with a saved model");
    predict->add_option("--model", model_path, "model file from train/tune")->required();
    auto* input_opt = predict->add_option("--input", input_path,
                                          "CSV of predictor rows (header required)");
    auto* row_opt = predict->add_option("--row", inline_row,
                                        "single comma-separated 13-value predictor row");
    input_opt->excludes(row_opt);

    auto* report = app.add_subcommand("report", "export figure data series");
    add_common(report, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (train->parsed()) {
            return cmd_train(opts, family, stamp);
        }
        if (tune->parsed()) {
            return cmd_tune(opts, family, grid_path, n_iter, n_iter_opt->count() > 0, cv_k,
                            cv_k_opt->count() > 0, tune_seed_opt->count() > 0, stamp);
        }
        if (evaluate->parsed()) {
            if (seed_ov_opt->count() > 0) seed_override = seed_ov;
            if (frac_ov_opt->count() > 0) fraction_override = fraction_ov;
            return cmd_evaluate(opts, model_path, seed_override, fraction_override);
        }
        if (predict->parsed()) {
            if (input_path.empty() && inline_row.empty()) {
                throw Error(Stage::Config, ErrorKind::Config,
                            "predict needs --input or --row");
            }
            return cmd_predict(model_path, input_path, inline_row);
        }
        if (report->parsed()) {
            return cmd_report(opts);
        }
    } catch (const Error& e) {
        std::cerr << "error [" << stage_name(e.stage()) << "]: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
