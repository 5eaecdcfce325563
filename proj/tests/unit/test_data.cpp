#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "vennabers/data.hpp"
#include "vennabers/error.hpp"

using namespace vennabers;

namespace {

Dataset parse(const std::string& text, CsvOptions options = {}, const Schema* schema = nullptr) {
    std::istringstream in(text);
    return read_csv(in, options, schema);
}

}  // namespace

TEST(Csv, NumericAndNominalColumns) {
    const auto d = parse("age,colour,label\n30,red,yes\n?,blue,no\n40,,yes\n50,\"red\",no\n");
    ASSERT_EQ(d.width(), 2u);
    EXPECT_EQ(d.schema.columns[0].kind, ColumnKind::numeric);
    EXPECT_EQ(d.schema.columns[1].kind, ColumnKind::nominal);
    EXPECT_EQ(d.schema.columns[1].categories, (std::vector<std::string>{"blue", "red"}));
    EXPECT_EQ(d.schema.label_values[0], "no");
    EXPECT_EQ(d.schema.label_values[1], "yes");
    EXPECT_EQ(d.labels, (std::vector<int>{1, 0, 1, 0}));
    EXPECT_TRUE(std::isnan(d.cell(1, 0)));
    EXPECT_TRUE(std::isnan(d.cell(2, 1)));
    EXPECT_EQ(d.missing_count(), 2u);
}

TEST(Csv, PositiveLabelAndLabelColumn) {
    CsvOptions options;
    options.label_column = "y";
    options.positive_label = "bad";
    const auto d = parse("y,x\ngood,1\nbad,2\n", options);
    EXPECT_EQ(d.labels, (std::vector<int>{0, 1}));
    EXPECT_EQ(d.schema.columns[0].name, "x");
}

TEST(Csv, ZeroOneLabelsMapDirectly) {
    const auto d = parse("x,y\n1,1\n2,1\n");
    EXPECT_EQ(d.labels, (std::vector<int>{1, 1}));
}

TEST(Csv, NoHeader) {
    CsvOptions options;
    options.has_header = false;
    const auto d = parse("1.5,0\n2.5,1\n", options);
    EXPECT_EQ(d.rows(), 2u);
    EXPECT_DOUBLE_EQ(d.cell(1, 0), 2.5);
}

TEST(Csv, Errors) {
    EXPECT_THROW(parse("x,y\n1,0\n2\n"), DataError);
    EXPECT_THROW(parse("x,y\n1,a\n2,b\n3,c\n"), DataError);
    EXPECT_THROW(parse("x,y\n1,\n"), DataError);
    try {
        parse("x,y\n1,0\n2,1,3\n");
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos);
    }
}

TEST(Csv, TestFileWithSchema) {
    const auto train = parse("x,c,y\n1,a,0\n2,b,1\n");
    const auto test = parse("x,c\n3,z\n4,a\n", {}, &train.schema);
    EXPECT_FALSE(test.labeled);
    EXPECT_TRUE(std::isnan(test.cell(0, 1)));  // unseen category
    EXPECT_EQ(test.cell(1, 1), 0.0);
    const auto labelled = parse("x,c,y\n3,b,1\n", {}, &train.schema);
    EXPECT_TRUE(labelled.labeled);
    EXPECT_EQ(labelled.labels, (std::vector<int>{1}));
    EXPECT_THROW(parse("q,c\n3,a\n", {}, &train.schema), DataError);
}

TEST(Csv, WriteReadRoundTrip) {
    const auto d = parse("x,c,y\n1.25,a,0\n?,b,1\n");
    std::ostringstream out;
    write_csv(d, out);
    const auto back = parse(out.str());
    EXPECT_EQ(back.fingerprint(), d.fingerprint());
}

TEST(Imputation, TrainingStatisticsOnly) {
    const auto train = parse("x,c,y\n1,a,0\n3,b,1\n?,b,1\n");
    const auto stats = fit_imputation(train);
    EXPECT_DOUBLE_EQ(stats.fill[0], 2.0);
    EXPECT_DOUBLE_EQ(stats.fill[1], 1.0);  // "b" is the mode
    EXPECT_EQ(stats.source_rows, 3u);
    EXPECT_EQ(stats.source_fingerprint, train.fingerprint());
    const auto test = parse("x,c\n?,?\n100,a\n", {}, &train.schema);
    const auto filled = impute(test, stats);
    EXPECT_DOUBLE_EQ(filled.cell(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(filled.cell(0, 1), 1.0);
    ASSERT_TRUE(filled.imputation.has_value());
    EXPECT_EQ(filled.imputation->source_fingerprint, train.fingerprint());
    EXPECT_EQ(fit_imputation(parse("x,c,y\n1,a,0\n1,b,1\n")).fill[1], 0.0);  // ties go to the first category
}

TEST(Encoding, OneHot) {
    const auto d = impute(parse("x,c,y\n1,a,0\n2,c,1\n3,b,1\n"), fit_imputation(parse("x,c,y\n1,a,0\n2,c,1\n3,b,1\n")));
    const auto m = encode(d);
    EXPECT_EQ(m.cols, 4u);
    EXPECT_EQ(d.schema.encoded_width(), 4u);
    EXPECT_EQ(std::vector<double>(m.row(1).begin(), m.row(1).end()), (std::vector<double>{2, 0, 0, 1}));
    EXPECT_THROW(encode(parse("x,y\n?,0\n1,1\n")), DataError);
}

TEST(Split, RatioAndPermutation) {
    SplitSpec spec;
    auto idx = split_indices(32561, spec);
    EXPECT_EQ(idx.proper.size(), 26049u);
    EXPECT_EQ(idx.calibration.size(), 32561u - 26049u);
    EXPECT_EQ(idx.proper.front(), 0u);
    spec.proper_parts = 2;
    spec.calibration_parts = 1;
    EXPECT_EQ(split_indices(300, spec).proper.size(), 200u);
    spec.seed = 4;
    const auto a = split_indices(300, spec), b = split_indices(300, spec);
    EXPECT_EQ(a.proper, b.proper);
    EXPECT_NE(a.proper, split_indices(300, SplitSpec{2, 1, {}, {}, false}).proper);
    spec.all_mode = true;
    EXPECT_EQ(split_indices(5, spec).proper.size(), 5u);
    EXPECT_EQ(split_indices(5, spec).calibration.size(), 5u);
    EXPECT_THROW(split_indices(1, SplitSpec{}), DataError);
}

TEST(Synthetic, GeneratorModel) {
    const auto d = generate_synthetic(20000, 1);
    EXPECT_EQ(d.rows(), 20000u);
    EXPECT_EQ(d.schema.columns[0].name, "x");
    EXPECT_EQ(d.fingerprint(), generate_synthetic(20000, 1).fingerprint());
    EXPECT_NE(d.fingerprint(), generate_synthetic(20000, 2).fingerprint());
    double ones = 0, mean1 = 0, mean0 = 0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        ones += d.labels[i];
        (d.labels[i] ? mean1 : mean0) += d.cells[i];
    }
    mean1 /= ones;
    mean0 /= static_cast<double>(d.rows()) - ones;
    EXPECT_NEAR(ones / static_cast<double>(d.rows()), 0.5, 0.015);
    EXPECT_NEAR(mean1 - mean0, 1.0, 0.05);
    EXPECT_THROW(generate_synthetic(0, 1), UsageError);
}

TEST(ScoreFiles, RoundTrip) {
    const std::string cal = testing::TempDir() + "cal_scores.csv";
    const std::string test = testing::TempDir() + "test_scores.csv";
    const std::vector<double> s{0.1, -2.5, 1e-300};
    write_calibration_scores(cal, s, std::vector<int>{1, 0, 1});
    write_test_scores(test, s);
    const auto back = read_calibration_scores(cal);
    EXPECT_EQ(back.scores, s);
    EXPECT_EQ(back.labels, (std::vector<int>{1, 0, 1}));
    EXPECT_EQ(read_test_scores(test), s);
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(INFINITY), "inf");
}
