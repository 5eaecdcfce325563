#include <gtest/gtest.h>

#include "vennabers/cvap.hpp"
#include "vennabers/error.hpp"
#include "vennabers/serialize.hpp"

using namespace vennabers;

TEST(Serialize, IvapRoundTripIsBitExact) {
    const std::vector<double> s{0.1, 0.7, 0.7, 1.0 / 3, 2.5, -1e-9};
    const std::vector<int> y{0, 1, 0, 1, 1, 0};
    const auto rule = IvapRule::build(s, y);
    const auto back = ivap_from_json(ivap_to_json(rule));
    EXPECT_EQ(back.points().scores, rule.points().scores);
    EXPECT_EQ(back.f().f0, rule.f().f0);
    EXPECT_EQ(back.f().f1, rule.f().f1);
    for (double v : {-1.0, 0.1, 0.5, 0.7, 3.0}) EXPECT_EQ(back.predict_interval(v), rule.predict_interval(v));
}

TEST(Serialize, ScorerAndCalibrators) {
    TrainedScorer scorer;
    scorer.kind = ScorerKind::logistic;
    scorer.dimension = 2;
    scorer.weights = {0.1, -3.25};
    scorer.intercept = 1.0 / 7;
    const auto back = scorer_from_json(scorer_to_json(scorer));
    EXPECT_EQ(back.weights, scorer.weights);
    EXPECT_EQ(back.intercept, scorer.intercept);

    const PlattModel platt{-1.5, 0.25, 3, 4, 7};
    const auto p = platt_from_json(platt_to_json(platt));
    EXPECT_EQ(p.a, platt.a);
    EXPECT_EQ(p.b, platt.b);
    EXPECT_EQ(p.k_plus, 3);

    const DirIsoModel iso{{1, 2}, {0.25, 0.5}};
    const auto i = direct_isotonic_from_json(direct_isotonic_to_json(iso));
    EXPECT_EQ(i.fitted, iso.fitted);
}

TEST(Serialize, CvapBundle) {
    const auto data = generate_synthetic(200, 3);
    const auto model = build_cvap({200, 1, data.cells}, data.labels, 3, ScorerSpec{}, FoldMode::randomized, 11);
    const auto bundle = cvap_from_json(cvap_to_json(model, MergeLoss::brier));
    EXPECT_EQ(bundle.merge, MergeLoss::brier);
    EXPECT_EQ(bundle.model.assignment().fold_of, model.assignment().fold_of);
    for (double v : {-1.0, 0.0, 0.5, 2.0}) {
        const std::vector<double> x{v};
        EXPECT_EQ(bundle.model.predict(x, MergeLoss::log), model.predict(x, MergeLoss::log));
    }
}

TEST(Serialize, RejectsWrongFormat) {
    const auto rule = IvapRule::build(std::vector<double>{1, 2}, std::vector<int>{0, 1});
    EXPECT_THROW(platt_from_json(ivap_to_json(rule)), DataError);
    EXPECT_THROW(ivap_from_json("{not json"), DataError);
    EXPECT_THROW(ivap_from_json(R"({"format":"vennabers-ivap","version":99})"), DataError);
    EXPECT_THROW(read_text_file("/nonexistent/model.json"), DataError);
}
