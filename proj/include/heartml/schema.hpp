#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace heartml {

enum class ValueKind { Real, Coded };

struct ColumnSpec {
    std::string name;
    ValueKind kind = ValueKind::Real;
    // Inclusive integer range, meaningful only for Coded columns.
    int code_min = 0;
    int code_max = 0;

    bool operator==(const ColumnSpec&) const = default;
};

/// Ordered column layout of the ingested CSV. The last column is always
/// the binary target.
struct FeatureSchema {
    std::vector<ColumnSpec> columns;

    std::size_t predictor_count() const { return columns.size() - 1; }
    const ColumnSpec& target_column() const { return columns.back(); }

    std::vector<std::string> predictor_names() const;

    /// FNV-1a over the comma-joined column names; persisted in model files
    /// and checked again at prediction time.
    std::uint64_t fingerprint() const;
    std::string fingerprint_hex() const;

    bool operator==(const FeatureSchema&) const = default;

    /// The canonical 14-column heart-disease layout:
    /// age, sex, cp, trestbps, chol, fbs, restecg, thalach, exang,
    /// oldpeak, slope, ca, thal, target.
    static FeatureSchema heart();
};

}  // namespace heartml
