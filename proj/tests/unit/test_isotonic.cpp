#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "vennabers/error.hpp"
#include "vennabers/isotonic.hpp"

using namespace vennabers;

namespace {

WeightedScorePoints unit_points(const std::vector<int>& labels) {
    WeightedScorePoints p;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        p.scores.push_back(static_cast<double>(i + 1));
        p.weights.push_back(1);
        p.mean_labels.push_back(labels[i]);
    }
    return p;
}

void expect_all_near(const std::vector<double>& got, const std::vector<double>& want, double tol = 1e-12) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

WeightedScorePoints random_points(std::mt19937_64& gen, std::size_t max_k) {
    const auto inst = oracle::random_instance(gen, 3 * max_k, static_cast<int>(max_k) - 1);
    return dedup_weighted(inst.scores, inst.labels);
}

}  // namespace

TEST(DedupWeighted, NoDuplicates) {
    const auto p = dedup_weighted(std::vector<double>{1, 2, 3}, std::vector<int>{0, 0, 1});
    EXPECT_EQ(p.scores, (std::vector<double>{1, 2, 3}));
    EXPECT_EQ(p.weights, (std::vector<std::int64_t>{1, 1, 1}));
    EXPECT_EQ(p.mean_labels, (std::vector<double>{0, 0, 1}));
}

TEST(DedupWeighted, MergesTies) {
    const auto p = dedup_weighted(std::vector<double>{2, 1, 1}, std::vector<int>{1, 0, 1});
    EXPECT_EQ(p.scores, (std::vector<double>{1, 2}));
    EXPECT_EQ(p.weights, (std::vector<std::int64_t>{2, 1}));
    EXPECT_EQ(p.mean_labels, (std::vector<double>{0.5, 1.0}));
}

TEST(DedupWeighted, Singleton) {
    const auto p = dedup_weighted(std::vector<double>{5}, std::vector<int>{1});
    EXPECT_EQ(p.size(), 1u);
    EXPECT_EQ(p.mean_labels[0], 1.0);
}

TEST(DedupWeighted, Errors) {
    EXPECT_THROW(dedup_weighted(std::vector<double>{}, std::vector<int>{}), DataError);
    EXPECT_THROW(dedup_weighted(std::vector<double>{1, 2}, std::vector<int>{1}), DataError);
    EXPECT_THROW(dedup_weighted(std::vector<double>{1}, std::vector<int>{2}), DataError);
    EXPECT_THROW(dedup_weighted(std::vector<double>{std::nan("")}, std::vector<int>{1}), DataError);
    try {
        dedup_weighted(std::vector<double>{}, std::vector<int>{});
    } catch (const DataError& e) {
        EXPECT_STREQ(e.what(), "empty calibration set");
    }
}

TEST(WeightedScorePoints, ValidateRejectsBadInvariants) {
    WeightedScorePoints p{{1, 1}, {1, 1}, {0, 1}};
    EXPECT_THROW(p.validate(), DataError);
    p = {{1, 2}, {0, 1}, {0, 1}};
    EXPECT_THROW(p.validate(), DataError);
    p = {{1, 2}, {3, 1}, {0.4, 1}};  // 0.4 * 3 is not a count
    EXPECT_THROW(p.validate(), DataError);
    p = {{1, 2}, {3, 1}, {1.0 / 3.0, 1}};
    EXPECT_NO_THROW(p.validate());
}

TEST(BuildCsd, Examples) {
    EXPECT_EQ(build_csd(unit_points({0, 0, 1})), (std::vector<CsdPoint>{{0, 0}, {1, 0}, {2, 0}, {3, 1}}));
    EXPECT_EQ(build_csd(WeightedScorePoints{{1, 2}, {2, 1}, {0.5, 1}}),
              (std::vector<CsdPoint>{{0, 0}, {2, 1}, {3, 2}}));
    EXPECT_EQ(build_csd(unit_points({0})), (std::vector<CsdPoint>{{0, 0}, {1, 0}}));
}

TEST(Gcm, DropsCollinearAndConcavePoints) {
    const std::vector<CsdPoint> csd{{0, 0}, {1, 1}, {2, 1}, {3, 1}, {4, 3}};
    EXPECT_EQ(greatest_convex_minorant(csd), (std::vector<CsdPoint>{{0, 0}, {3, 1}, {4, 3}}));
}

TEST(FitIsotonic, Examples) {
    expect_all_near(fit_isotonic(unit_points({1, 0})), {0.5, 0.5});
    expect_all_near(fit_isotonic(unit_points({0, 1, 1})), {0, 1, 1});
    const WeightedScorePoints p{{1, 2, 3, 4}, {1, 2, 1, 1}, {0, 1, 0, 1}};
    expect_all_near(fit_isotonic(p), oracle::brute_force_isotonic({1, 2, 1, 1}, {0, 1, 0, 1}));
    expect_all_near(fit_isotonic(p), {0, 2.0 / 3.0, 2.0 / 3.0, 1});
}

TEST(FitIsotonic, MatchesBruteForce) {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = random_points(gen, 8);
        std::vector<double> w(p.weights.begin(), p.weights.end());
        expect_all_near(fit_isotonic(p), oracle::brute_force_isotonic(w, p.mean_labels), 1e-9);
    }
}

TEST(FitIsotonic, LevelSetsAverageToFittedValue) {
    std::mt19937_64 gen(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_points(gen, 15);
        const auto fit = fit_isotonic(p);
        for (std::size_t i = 1; i < fit.size(); ++i) EXPECT_LE(fit[i - 1], fit[i]);
        std::size_t start = 0;
        for (std::size_t i = 0; i <= fit.size(); ++i) {
            if (i < fit.size() && fit[i] == fit[start]) continue;
            double w = 0, s = 0;
            for (std::size_t j = start; j < i; ++j) {
                w += static_cast<double>(p.weights[j]);
                s += static_cast<double>(p.weights[j]) * p.mean_labels[j];
            }
            EXPECT_NEAR(s / w, fit[start], 1e-12);
            start = i;
        }
    }
}

TEST(FVectors, TableRowsFromThreePoints) {
    auto p = unit_points({0, 0, 1});
    expect_all_near(compute_f1(p), {1.0 / 3, 0.5, 1});
    expect_all_near(compute_f0(p), {0, 0, 0.5});
    expect_all_near(compute_f1(unit_points({1, 1, 1})), {1, 1, 1});
    expect_all_near(compute_f0(unit_points({0, 0, 0})), {0, 0, 0});
}

TEST(FVectors, TableRowsFromFourPoints) {
    expect_all_near(compute_f1(unit_points({1, 0, 1, 0})), {0.6, 0.6, 2.0 / 3, 2.0 / 3});
    expect_all_near(compute_f0(unit_points({1, 1, 0, 1})), {0.5, 0.5, 0.5, 0.6});
}

TEST(FVectors, MatchInsertAndRefit) {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = oracle::random_instance(gen, 25, 9);
        const auto p = dedup_weighted(inst.scores, inst.labels);
        const auto f = compute_f_vectors(p);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const auto [f0, f1] = oracle::refit_interval(inst.scores, inst.labels, p.scores[i]);
            EXPECT_NEAR(f.f0[i], f0, 1e-9);
            EXPECT_NEAR(f.f1[i], f1, 1e-9);
        }
    }
}

TEST(FVectors, OrderedAndMonotone) {
    std::mt19937_64 gen(14);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = random_points(gen, 12);
        const auto f = compute_f_vectors(p);
        for (std::size_t i = 0; i < p.size(); ++i) {
            EXPECT_LT(f.f0[i], f.f1[i]);
            if (i > 0) {
                EXPECT_LE(f.f0[i - 1], f.f0[i]);
                EXPECT_LE(f.f1[i - 1], f.f1[i]);
            }
        }
    }
}

TEST(FVectors, ConstantLabels) {
    std::mt19937_64 gen(15);
    for (int trial = 0; trial < 50; ++trial) {
        auto p = random_points(gen, 10);
        std::fill(p.mean_labels.begin(), p.mean_labels.end(), 0.0);
        for (double v : compute_f0(p)) EXPECT_EQ(v, 0.0);
        std::fill(p.mean_labels.begin(), p.mean_labels.end(), 1.0);
        for (double v : compute_f1(p)) EXPECT_EQ(v, 1.0);
    }
}

TEST(FVectors, SymmetryIdentityIsExact) {
    std::mt19937_64 gen(16);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = random_points(gen, 12);
        WeightedScorePoints mirrored;
        for (std::size_t j = p.size(); j-- > 0;) {
            mirrored.scores.push_back(-p.scores[j]);
            mirrored.weights.push_back(p.weights[j]);
            mirrored.mean_labels.push_back(1.0 - p.mean_labels[j]);
        }
        const auto f0 = compute_f0_slopes(p);
        const auto f1 = compute_f1_slopes(mirrored);
        for (std::size_t i = 0; i < p.size(); ++i) {
            // f0 = r0/d0 and 1 - f1 = (d1 - r1)/d1
            const auto& a = f0[i];
            const auto& b = f1[p.size() - 1 - i];
            EXPECT_EQ(a.rise * static_cast<double>(b.run), (static_cast<double>(b.run) - b.rise) * static_cast<double>(a.run));
        }
    }
}

TEST(FVectors, PushCountsAreLinear) {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_points(gen, 40);
        const auto bound = 2 * p.size() + 2;
        CornerStats s0, s1;
        compute_f0(p, &s0);
        compute_f1(p, &s1);
        EXPECT_LE(s0.initial_pushes, bound);
        EXPECT_LE(s0.sweep_pushes, bound);
        EXPECT_LE(s1.initial_pushes, bound);
        EXPECT_LE(s1.sweep_pushes, bound);
    }
}

TEST(FVectors, AcceptsInfiniteScores) {
    const WeightedScorePoints p{{-INFINITY, 0.0, INFINITY}, {1, 1, 1}, {1, 0, 0}};
    EXPECT_NO_THROW(compute_f_vectors(p));
    expect_all_near(fit_isotonic(p), {1.0 / 3, 1.0 / 3, 1.0 / 3});
}
