#include "vennabers/merging.hpp"

#include <algorithm>
#include <cmath>

#include "vennabers/error.hpp"

namespace vennabers {

namespace {
constexpr double kLogFloor = 1e-300;
}

MergeLoss parse_merge_loss(std::string_view name) {
    if (name == "log") return MergeLoss::log;
    if (name == "brier") return MergeLoss::brier;
    throw UsageError("unknown merge loss '" + std::string(name) + "' (expected log or brier)");
}

std::string to_string(MergeLoss loss) { return loss == MergeLoss::log ? "log" : "brier"; }

void validate_batch(std::span<const ProbInterval> batch) {
    if (batch.empty()) throw DataError("cannot merge an empty batch of intervals");
    for (const auto& [p0, p1] : batch) {
        if (!(p0 >= 0.0 && p1 <= 1.0 && p0 <= p1))
            throw DataError("interval must satisfy 0 <= p0 <= p1 <= 1");
    }
}

double merge_log(std::span<const ProbInterval> batch) {
    validate_batch(batch);
    // Same value as the K-fold formula, without the log/exp rounding.
    if (batch.size() == 1) return merge_log(batch.front());
    double log_upper = 0.0;
    double log_complement = 0.0;
    for (const auto& [p0, p1] : batch) {
        log_upper += std::log(std::max(p1, kLogFloor));
        log_complement += std::log(std::max(1.0 - p0, kLogFloor));
    }
    const auto k = static_cast<double>(batch.size());
    // GM(p1) / (GM(1-p0) + GM(p1)) = 1 / (1 + exp(mean log(1-p0) - mean log p1))
    return 1.0 / (1.0 + std::exp((log_complement - log_upper) / k));
}

double merge_brier(std::span<const ProbInterval> batch) {
    validate_batch(batch);
    double sum = 0.0;
    for (const auto& [p0, p1] : batch) sum += p1 + 0.5 * p0 * p0 - 0.5 * p1 * p1;
    return sum / static_cast<double>(batch.size());
}

double merge(std::span<const ProbInterval> batch, MergeLoss loss) {
    return loss == MergeLoss::log ? merge_log(batch) : merge_brier(batch);
}

double merge_log(const ProbInterval& interval) {
    validate_batch({&interval, 1});
    return interval.p1 / (1.0 - interval.p0 + interval.p1);
}

double merge_brier(const ProbInterval& interval) { return merge_brier(std::span<const ProbInterval>{&interval, 1}); }

}  // namespace vennabers
