#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace vennabers {

enum class ColumnKind { numeric, nominal };

struct ColumnInfo {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    std::vector<std::string> categories;  // nominal only, sorted
};

/// Column layout plus the mapping of raw label values to 0 and 1.
struct Schema {
    std::vector<ColumnInfo> columns;
    std::string label_name;
    std::array<std::string, 2> label_values;  // raw value for 0, raw value for 1

    // Width after one-hot encoding of nominal columns.
    std::size_t encoded_width() const;
};

/// Fill values learned from a training set: the mean of each numeric column
/// and the modal category index of each nominal column.
struct ImputationStats {
    std::vector<double> fill;
    std::size_t source_rows = 0;
    std::uint64_t source_fingerprint = 0;  // fingerprint() of the training data
};

/// Raw table: one cell per column, NaN marks a missing value, nominal cells
/// hold the category index. Labels are 0/1.
struct Dataset {
    Schema schema;
    std::vector<double> cells;
    std::vector<int> labels;                    // all 0 when !labeled
    bool labeled = true;                        // false for test files without a label column
    std::optional<ImputationStats> imputation;  // set once imputed

    std::size_t rows() const { return labels.size(); }
    std::size_t width() const { return schema.columns.size(); }
    double cell(std::size_t row, std::size_t column) const { return cells[row * width() + column]; }
    std::span<const double> row(std::size_t r) const { return {cells.data() + r * width(), width()}; }
    std::size_t missing_count() const;

    Dataset subset(std::span<const std::size_t> indices) const;
    // Hash of schema, cells and labels.
    std::uint64_t fingerprint() const;
};

/// Dense row-major numeric features.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

struct CsvOptions {
    bool has_header = true;
    std::string label_column;                  // empty: last column
    std::optional<std::string> positive_label;  // raw value mapped to 1
};

// Comma-separated, double-quoted fields, missing cells are empty or "?".
// Labels "0"/"1" map to themselves; otherwise the lexicographically smaller
// of the two raw values maps to 0 unless `positive_label` says otherwise.
// With `schema`, columns, categories and label mapping are taken from it
// (unknown categories become missing) and the label column may be absent.
// Throws DataError with the row number for malformed rows.
Dataset read_csv(std::istream& in, const CsvOptions& options, const Schema* schema = nullptr);
Dataset load_csv(const std::string& path, const CsvOptions& options, const Schema* schema = nullptr);
void write_csv(const Dataset& data, std::ostream& out);
void save_csv(const Dataset& data, const std::string& path);

ImputationStats fit_imputation(const Dataset& train);
Dataset impute(const Dataset& data, const ImputationStats& stats);

// One-hot encodes nominal columns. Throws DataError if any cell is missing.
FeatureMatrix encode(const Dataset& data);

struct SplitSpec {
    std::size_t proper_parts = 4;
    std::size_t calibration_parts = 1;
    std::optional<std::size_t> proper_size;  // overrides the ratio
    std::optional<std::uint64_t> seed;       // permute before splitting
    bool all_mode = false;                   // proper = calibration = everything
};

struct SplitIndices {
    std::vector<std::size_t> proper;
    std::vector<std::size_t> calibration;
};

// The first ceil(m / (m + k) * n) rows (after the optional permutation) are
// the proper training set, the rest the calibration set.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);
std::pair<Dataset, Dataset> split_proper_calibration(const Dataset& data, const SplitSpec& spec);

// x = y + N(0,1), y ~ Bernoulli(1/2); one numeric column "x", label "y".
Dataset generate_synthetic(std::size_t n, std::uint64_t seed);

/// Calibration input of an external model: a `score,label` file.
struct ScoredLabels {
    std::vector<double> scores;
    std::vector<int> labels;
};

ScoredLabels read_calibration_scores(const std::string& path);
std::vector<double> read_test_scores(const std::string& path);
void write_calibration_scores(const std::string& path, std::span<const double> scores, std::span<const int> labels);
void write_test_scores(const std::string& path, std::span<const double> scores);

// Numeric column of a CSV file with a header; empty `column` means the last.
std::vector<double> read_numeric_column(const std::string& path, const std::string& column);

// Shortest text that reads back to the same double.
std::string format_double(double value);

}  // namespace vennabers
