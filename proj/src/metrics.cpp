#include "vennabers/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "vennabers/error.hpp"

namespace vennabers {

namespace {

void check(double p, int y) {
    if (!(p >= 0.0 && p <= 1.0)) throw DataError("probability " + std::to_string(p) + " is outside [0, 1]");
    if (y != 0 && y != 1) throw DataError("label must be 0 or 1");
}

}  // namespace

double log_loss(double p, int y) {
    check(p, y);
    const double q = y == 1 ? p : 1.0 - p;
    if (q == 0.0) return std::numeric_limits<double>::infinity();
    return -std::log2(q);
}

double brier_loss(double p, int y) {
    check(p, y);
    const double d = static_cast<double>(y) - p;
    return 4.0 * d * d;
}

EvalReport evaluate(std::span<const double> predictions, std::span<const int> labels) {
    if (predictions.size() != labels.size())
        throw DataError("predictions and labels differ in length (" + std::to_string(predictions.size()) + " vs " +
                        std::to_string(labels.size()) + ")");
    if (predictions.empty()) throw DataError("nothing to evaluate");
    EvalReport report;
    report.n = predictions.size();
    double log_sum = 0.0;
    double brier_sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double l = log_loss(predictions[i], labels[i]);
        if (std::isinf(l)) ++report.infinite_log_losses;
        log_sum += l;
        brier_sum += brier_loss(predictions[i], labels[i]);
    }
    const auto n = static_cast<double>(report.n);
    report.mean_log_loss = log_sum / n;
    report.mean_brier_loss = brier_sum / n;
    return report;
}

}  // namespace vennabers
