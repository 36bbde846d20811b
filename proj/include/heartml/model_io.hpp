#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "heartml/classifier.hpp"
#include "heartml/metrics.hpp"
#include "heartml/preprocess.hpp"
#include "heartml/schema.hpp"

namespace heartml {

inline constexpr int kModelFormatVersion = 1;

struct TrainingMeta {
    std::uint64_t seed = 0;
    double test_fraction = 0.0;
    std::size_t dataset_rows = 0;
    // Omitted (null) by default so reruns produce byte-identical files.
    std::optional<std::string> timestamp;
};

nlohmann::json pipeline_to_json(const PipelineParams& pipeline);
PipelineParams pipeline_from_json(const nlohmann::json& j);

/// Family-specific payload for a fitted classifier.
nlohmann::json model_payload(const Classifier& model, ModelFamily family);
std::unique_ptr<Classifier> model_from_payload(ModelFamily family, const nlohmann::json& j);

/// Complete versioned model file document.
nlohmann::json build_model_file(ModelFamily family, const PipelineParams& pipeline,
                                const nlohmann::json& payload, const TrainingMeta& meta,
                                const FeatureSchema& schema);

struct LoadedModel {
    ModelFamily family = ModelFamily::LogReg;
    PipelineParams pipeline;
    std::shared_ptr<Classifier> model;
    TrainingMeta meta;
};

/// Parse and validate a model file: the format version must be known and
/// the stored schema fingerprint must match the expected schema.
LoadedModel load_model_file(const std::filesystem::path& path, const FeatureSchema& expected);

void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Full-precision JSON form of a classification report.
nlohmann::json report_to_json(const ClassReport& report);

}  // namespace heartml
