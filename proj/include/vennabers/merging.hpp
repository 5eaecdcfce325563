#pragma once

#include <span>
#include <string>
#include <string_view>

namespace vennabers {

/// Lower and upper probability of label 1.
struct ProbInterval {
    double p0 = 0.0;
    double p1 = 1.0;

    friend bool operator==(const ProbInterval&, const ProbInterval&) = default;
};

/// Loss under which a set of intervals is merged into one probability.
enum class MergeLoss { log, brier };

MergeLoss parse_merge_loss(std::string_view name);
std::string to_string(MergeLoss loss);

// Throws DataError unless the batch is nonempty and 0 <= p0 <= p1 <= 1 holds
// for every pair. p0 == p1 is accepted so precise probabilities pass through.
void validate_batch(std::span<const ProbInterval> batch);

// GM(p1) / (GM(1 - p0) + GM(p1)), geometric means taken in log space.
// p1 and 1 - p0 are clamped below at 1e-300 before taking logarithms.
double merge_log(std::span<const ProbInterval> batch);

// Mean over the batch of p1 + p0^2/2 - p1^2/2.
double merge_brier(std::span<const ProbInterval> batch);

double merge(std::span<const ProbInterval> batch, MergeLoss loss);

// Single-interval forms used by the log- and Brier-minimax IVAP.
double merge_log(const ProbInterval& interval);
double merge_brier(const ProbInterval& interval);

}  // namespace vennabers
