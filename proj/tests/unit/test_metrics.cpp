#include <gtest/gtest.h>

#include <cmath>

#include "vennabers/error.hpp"
#include "vennabers/metrics.hpp"

using namespace vennabers;

TEST(Metrics, NoInformationPredictionCostsOne) {
    const std::vector<double> p(6, 0.5);
    const std::vector<int> y{0, 1, 1, 0, 1, 0};
    const auto r = evaluate(p, y);
    EXPECT_DOUBLE_EQ(r.mean_log_loss, 1.0);
    EXPECT_DOUBLE_EQ(r.mean_brier_loss, 1.0);
    EXPECT_EQ(r.n, 6u);
    EXPECT_EQ(r.infinite_log_losses, 0u);
}

TEST(Metrics, SingleLosses) {
    EXPECT_DOUBLE_EQ(log_loss(0.25, 1), 2.0);
    EXPECT_DOUBLE_EQ(log_loss(0.75, 0), 2.0);
    EXPECT_DOUBLE_EQ(brier_loss(0.25, 1), 4 * 0.5625);
    EXPECT_DOUBLE_EQ(brier_loss(1.0, 1), 0.0);
    EXPECT_DOUBLE_EQ(log_loss(1.0, 1), 0.0);
}

TEST(Metrics, ConfidentMistakeIsInfinite) {
    EXPECT_TRUE(std::isinf(log_loss(0.0, 1)));
    EXPECT_TRUE(std::isinf(log_loss(1.0, 0)));
    const auto r = evaluate(std::vector<double>{0.0, 0.5, 1.0}, std::vector<int>{1, 1, 0});
    EXPECT_TRUE(std::isinf(r.mean_log_loss));
    EXPECT_EQ(r.infinite_log_losses, 2u);
    EXPECT_DOUBLE_EQ(r.mean_brier_loss, (4.0 + 1.0 + 4.0) / 3);
}

TEST(Metrics, ProperOnAGrid) {
    // The expected loss under a true rate q is minimized by predicting q.
    for (int qi = 1; qi < 20; ++qi) {
        const double q = qi / 20.0;
        const auto expected = [&](double p, auto loss) { return q * loss(p, 1) + (1 - q) * loss(p, 0); };
        for (int pi = 1; pi < 20; ++pi) {
            const double p = pi / 20.0;
            EXPECT_LE(expected(q, log_loss), expected(p, log_loss) + 1e-12);
            EXPECT_LE(expected(q, brier_loss), expected(p, brier_loss) + 1e-12);
        }
    }
}

TEST(Metrics, Errors) {
    EXPECT_THROW(log_loss(1.5, 1), DataError);
    EXPECT_THROW(brier_loss(-0.1, 1), DataError);
    EXPECT_THROW(log_loss(0.5, 2), DataError);
    EXPECT_THROW(evaluate(std::vector<double>{0.5}, std::vector<int>{1, 0}), DataError);
    EXPECT_THROW(evaluate(std::vector<double>{}, std::vector<int>{}), DataError);
}
