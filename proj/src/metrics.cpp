#include "heartml/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "heartml/error.hpp"

namespace heartml {

namespace {

[[noreturn]] void eval_error(const std::string& msg) {
    throw Error(Stage::Evaluation, ErrorKind::Validation, msg);
}

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double harmonic(double a, double b) { return a + b == 0.0 ? 0.0 : 2.0 * a * b / (a + b); }

}  // namespace

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size()) {
        eval_error("true/predicted vectors have different lengths");
    }
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i], p = y_pred[i];
        if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
            eval_error("labels must be 0 or 1");
        }
        cm.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)] += 1;
    }
    return cm;
}

ClassReport class_report(const ConfusionMatrix& cm) {
    if (cm.total() == 0) eval_error("confusion matrix is empty");

    ClassReport report;
    report.total_support = cm.total();
    for (std::size_t c = 0; c < 2; ++c) {
        const auto diag = static_cast<double>(cm.counts[c][c]);
        const auto col_sum = static_cast<double>(cm.counts[0][c] + cm.counts[1][c]);
        const auto row_sum = static_cast<double>(cm.counts[c][0] + cm.counts[c][1]);
        ClassMetrics& m = report.per_class[c];
        m.precision = safe_div(diag, col_sum);
        m.recall = safe_div(diag, row_sum);
        m.f1 = harmonic(m.precision, m.recall);
        m.support = cm.counts[c][0] + cm.counts[c][1];
    }
    const auto total = static_cast<double>(report.total_support);
    report.accuracy = static_cast<double>(cm.counts[0][0] + cm.counts[1][1]) / total;
    report.macro_precision = (report.per_class[0].precision + report.per_class[1].precision) / 2.0;
    report.macro_recall = (report.per_class[0].recall + report.per_class[1].recall) / 2.0;
    report.macro_f1 = (report.per_class[0].f1 + report.per_class[1].f1) / 2.0;
    auto weighted = [&](double m0, double m1) {
        return (static_cast<double>(report.per_class[0].support) * m0 +
                static_cast<double>(report.per_class[1].support) * m1) /
               total;
    };
    report.weighted_precision =
        weighted(report.per_class[0].precision, report.per_class[1].precision);
    report.weighted_recall = weighted(report.per_class[0].recall, report.per_class[1].recall);
    report.weighted_f1 = weighted(report.per_class[0].f1, report.per_class[1].f1);
    return report;
}

double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size()) {
        eval_error("true/predicted vectors have different lengths");
    }
    if (y_true.empty()) eval_error("cannot score an empty prediction set");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == y_pred[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(y_true.size());
}

RocCurve roc_points(std::span<const int> y_true, std::span<const double> scores) {
    if (y_true.size() != scores.size()) {
        eval_error("truth/score vectors have different lengths");
    }
    std::uint64_t positives = 0, negatives = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (!std::isfinite(scores[i])) eval_error("scores must be finite");
        (y_true[i] == 1 ? positives : negatives) += 1;
    }
    if (positives == 0 || negatives == 0) {
        eval_error("ROC needs both classes present");
    }

    std::vector<std::size_t> order(y_true.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });

    RocCurve curve;
    curve.points.emplace_back(0.0, 0.0);
    std::uint64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double block_score = scores[order[i]];
        while (i < order.size() && scores[order[i]] == block_score) {
            (y_true[order[i]] == 1 ? tp : fp) += 1;
            ++i;
        }
        curve.points.emplace_back(static_cast<double>(fp) / static_cast<double>(negatives),
                                  static_cast<double>(tp) / static_cast<double>(positives));
        curve.thresholds.push_back(block_score);
    }
    if (curve.points.back() != std::pair{1.0, 1.0}) {
        curve.points.emplace_back(1.0, 1.0);
    }

    double auc = 0.0;
    for (std::size_t j = 1; j < curve.points.size(); ++j) {
        const auto& [x0, y0] = curve.points[j - 1];
        const auto& [x1, y1] = curve.points[j];
        auc += (x1 - x0) * (y0 + y1) / 2.0;
    }
    curve.auc = auc;
    return curve;
}

std::string render_report(const ClassReport& report) {
    // Layout: 12-wide right-justified row label, then one 10-wide cell per
    // column (space + 9-wide right-justified value), metrics at 2 decimals.
    constexpr int kNameWidth = 12;
    char line[128];
    std::string out;

    auto metric_row = [&](const char* name, double p, double r, double f1,
                          std::uint64_t support) {
        std::snprintf(line, sizeof(line), "%*s  %9.2f %9.2f %9.2f %9llu\n", kNameWidth, name, p,
                      r, f1, static_cast<unsigned long long>(support));
        out += line;
    };

    std::snprintf(line, sizeof(line), "%*s  %9s %9s %9s %9s\n", kNameWidth, "", "precision",
                  "recall", "f1-score", "support");
    out += line;
    out += '\n';
    for (std::size_t c = 0; c < 2; ++c) {
        const ClassMetrics& m = report.per_class[c];
        metric_row(c == 0 ? "0" : "1", m.precision, m.recall, m.f1, m.support);
    }
    out += '\n';
    std::snprintf(line, sizeof(line), "%*s  %9s %9s %9.2f %9llu\n", kNameWidth, "accuracy", "",
                  "", report.accuracy, static_cast<unsigned long long>(report.total_support));
    out += line;
    metric_row("macro avg", report.macro_precision, report.macro_recall, report.macro_f1,
               report.total_support);
    metric_row("weighted avg", report.weighted_precision, report.weighted_recall,
               report.weighted_f1, report.total_support);
    return out;
}

}  // namespace heartml
