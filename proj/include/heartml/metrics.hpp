#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace heartml {

/// 2x2 counts, rows = true class, columns = predicted class.
struct ConfusionMatrix {
    std::array<std::array<std::uint64_t, 2>, 2> counts{{{0, 0}, {0, 0}}};

    std::uint64_t total() const {
        return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
    }

    bool operator==(const ConfusionMatrix&) const = default;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
};

struct ClassReport {
    std::array<ClassMetrics, 2> per_class;
    double accuracy = 0.0;
    double macro_precision = 0.0, macro_recall = 0.0, macro_f1 = 0.0;
    double weighted_precision = 0.0, weighted_recall = 0.0, weighted_f1 = 0.0;
    std::uint64_t total_support = 0;
};

struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (fpr, tpr), starts (0,0), ends (1,1)
    std::vector<double> thresholds;                 // one per swept score block
    double auc = 0.0;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred);

/// Per-class precision/recall/F1/support plus accuracy and macro/weighted
/// averages. Zero denominators yield 0.
ClassReport class_report(const ConfusionMatrix& cm);

double accuracy(std::span<const int> y_true, std::span<const int> y_pred);

/// Threshold sweep over descending scores (exact ties move as one block),
/// AUC by trapezoid. Requires both classes present.
RocCurve roc_points(std::span<const int> y_true, std::span<const double> scores);

/// Plain-text table in the conventional classification-report layout,
/// 2-decimal metrics.
std::string render_report(const ClassReport& report);

}  // namespace heartml
