#pragma once

#include <cstdint>
#include <vector>

#include "heartml/dataset.hpp"

namespace heartml {

/// Per-column medians fitted on training rows only.
struct ImputerParams {
    std::vector<double> medians;
    std::size_t fitted_on = 0;

    bool operator==(const ImputerParams&) const = default;
};

/// Per-column mean and population (1/n) standard deviation.
struct ScalerParams {
    std::vector<double> means;
    std::vector<double> stds;

    bool operator==(const ScalerParams&) const = default;
};

/// Frozen preprocessing state: impute with training medians, then
/// standardize with training mean/std. Fitted once on the training split
/// and applied unchanged to anything else.
struct PipelineParams {
    ImputerParams imputer;
    ScalerParams scaler;
    std::uint64_t schema_fingerprint = 0;

    bool operator==(const PipelineParams&) const = default;
};

/// Median of the non-missing entries per column; even counts average the
/// two middle order statistics.
ImputerParams fit_imputer(const Dataset& train);

/// Replace every missing cell by its column median.
Dataset apply_imputer(const ImputerParams& params, Dataset ds);

/// Mean and population std per column; requires no missing cells.
ScalerParams fit_scaler(const Dataset& train);

/// z = (x - mean) / std per column; columns with std 0 map to 0.
Dataset apply_scaler(const ScalerParams& params, Dataset ds);

PipelineParams fit_pipeline(const Dataset& train);
Dataset apply_pipeline(const PipelineParams& params, Dataset ds);

}  // namespace heartml
