#include "heartml/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heartml/error.hpp"

namespace heartml {

namespace {

[[noreturn]] void preprocess_error(const std::string& msg) {
    throw Error(Stage::Preprocess, ErrorKind::Validation, msg);
}

void require_width(std::size_t params_width, const Dataset& ds, const char* what) {
    if (params_width != ds.features.cols) {
        preprocess_error(std::string(what) + " fitted for " + std::to_string(params_width) +
                         " columns, dataset has " + std::to_string(ds.features.cols));
    }
}

}  // namespace

ImputerParams fit_imputer(const Dataset& train) {
    const std::size_t p = train.features.cols;
    ImputerParams params;
    params.fitted_on = train.size();
    params.medians.resize(p);

    std::vector<double> column;
    for (std::size_t c = 0; c < p; ++c) {
        column.clear();
        for (std::size_t r = 0; r < train.size(); ++r) {
            const double v = train.features.at(r, c);
            if (!std::isnan(v)) column.push_back(v);
        }
        if (column.empty()) {
            preprocess_error("column \"" + train.schema.columns[c].name +
                             "\" has no non-missing values to impute from");
        }
        std::sort(column.begin(), column.end());
        const std::size_t m = column.size();
        params.medians[c] = (m % 2 == 1)
                                ? column[m / 2]
                                : (column[m / 2 - 1] + column[m / 2]) / 2.0;
    }
    return params;
}

Dataset apply_imputer(const ImputerParams& params, Dataset ds) {
    require_width(params.medians.size(), ds, "imputer");
    for (std::size_t r = 0; r < ds.size(); ++r) {
        for (std::size_t c = 0; c < ds.features.cols; ++c) {
            double& v = ds.features.at(r, c);
            if (std::isnan(v)) v = params.medians[c];
        }
    }
    return ds;
}

ScalerParams fit_scaler(const Dataset& train) {
    if (train.size() == 0) {
        preprocess_error("cannot fit scaler on an empty dataset");
    }
    if (train.missing_count() > 0) {
        preprocess_error("scaler requires imputed data; dataset still has missing cells");
    }
    const std::size_t p = train.features.cols;
    const auto n = static_cast<double>(train.size());

    ScalerParams params;
    params.means.assign(p, 0.0);
    params.stds.assign(p, 0.0);
    for (std::size_t r = 0; r < train.size(); ++r) {
        for (std::size_t c = 0; c < p; ++c) {
            params.means[c] += train.features.at(r, c);
        }
    }
    for (std::size_t c = 0; c < p; ++c) params.means[c] /= n;
    for (std::size_t r = 0; r < train.size(); ++r) {
        for (std::size_t c = 0; c < p; ++c) {
            const double d = train.features.at(r, c) - params.means[c];
            params.stds[c] += d * d;
        }
    }
    for (std::size_t c = 0; c < p; ++c) params.stds[c] = std::sqrt(params.stds[c] / n);
    return params;
}

Dataset apply_scaler(const ScalerParams& params, Dataset ds) {
    require_width(params.means.size(), ds, "scaler");
    for (std::size_t r = 0; r < ds.size(); ++r) {
        for (std::size_t c = 0; c < ds.features.cols; ++c) {
            double& v = ds.features.at(r, c);
            v = params.stds[c] == 0.0 ? 0.0 : (v - params.means[c]) / params.stds[c];
        }
    }
    return ds;
}

PipelineParams fit_pipeline(const Dataset& train) {
    PipelineParams params;
    params.imputer = fit_imputer(train);
    params.scaler = fit_scaler(apply_imputer(params.imputer, train));
    params.schema_fingerprint = train.schema.fingerprint();
    return params;
}

Dataset apply_pipeline(const PipelineParams& params, Dataset ds) {
    return apply_scaler(params.scaler, apply_imputer(params.imputer, std::move(ds)));
}

}  // namespace heartml
