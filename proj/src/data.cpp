#include "vennabers/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "vennabers/error.hpp"
#include "vennabers/rng.hpp"

namespace vennabers {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                field += ch;
            }
        } else if (ch == '"') {
            quoted = true;
            was_quoted = true;
            field = trim(field);
        } else if (ch == ',') {
            fields.push_back(was_quoted ? field : trim(field));
            field.clear();
            was_quoted = false;
        } else {
            field += ch;
        }
    }
    if (quoted) throw DataError("row " + std::to_string(line_no) + ": unterminated quoted field");
    fields.push_back(was_quoted ? field : trim(field));
    return fields;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

std::optional<double> parse_number(const std::string& text) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (begin != end && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

struct Records {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

Records read_records(std::istream& in, bool has_header) {
    Records out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_record(line, line_no);
        if (has_header && out.header.empty()) {
            out.header = std::move(fields);
            continue;
        }
        if (out.header.empty()) {
            for (std::size_t c = 0; c < fields.size(); ++c) out.header.push_back("col" + std::to_string(c + 1));
        }
        if (fields.size() != out.header.size())
            throw DataError("row " + std::to_string(line_no) + ": expected " + std::to_string(out.header.size()) +
                            " fields, found " + std::to_string(fields.size()));
        out.rows.push_back(std::move(fields));
        out.line_numbers.push_back(line_no);
    }
    if (out.header.empty()) throw DataError("CSV input is empty");
    return out;
}

std::uint64_t fnv(std::uint64_t hash, const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

}  // namespace

std::size_t Schema::encoded_width() const {
    std::size_t width = 0;
    for (const auto& column : columns) width += column.kind == ColumnKind::numeric ? 1 : column.categories.size();
    return width;
}

std::size_t Dataset::missing_count() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](double v) { return std::isnan(v); }));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.schema = schema;
    out.labeled = labeled;
    out.imputation = imputation;
    out.cells.reserve(indices.size() * width());
    out.labels.reserve(indices.size());
    for (std::size_t index : indices) {
        if (index >= rows()) throw DataError("row index out of range");
        const auto r = row(index);
        out.cells.insert(out.cells.end(), r.begin(), r.end());
        out.labels.push_back(labels[index]);
    }
    return out;
}

std::uint64_t Dataset::fingerprint() const {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const auto& column : schema.columns) hash = fnv(hash, column.name.data(), column.name.size());
    for (double v : cells) {
        // Canonical NaN so missing cells hash alike.
        const double canonical = std::isnan(v) ? kMissing : v;
        std::uint64_t bits = 0;
        std::memcpy(&bits, &canonical, sizeof bits);
        hash = fnv(hash, &bits, sizeof bits);
    }
    return fnv(hash, labels.data(), labels.size() * sizeof(int));
}

Dataset read_csv(std::istream& in, const CsvOptions& options, const Schema* schema) {
    const Records records = read_records(in, options.has_header);
    const auto& header = records.header;

    std::size_t label_index = header.size() - 1;
    const std::string wanted_label =
        !options.label_column.empty() ? options.label_column : (schema ? schema->label_name : std::string());
    bool labeled = true;
    if (!wanted_label.empty()) {
        const auto it = std::find(header.begin(), header.end(), wanted_label);
        if (it != header.end()) {
            label_index = static_cast<std::size_t>(it - header.begin());
        } else if (schema && options.has_header && header.size() == schema->columns.size()) {
            labeled = false;
            label_index = header.size();
        } else {
            throw DataError("label column '" + wanted_label + "' not found");
        }
    }

    std::vector<std::size_t> feature_columns;
    for (std::size_t c = 0; c < header.size(); ++c)
        if (c != label_index) feature_columns.push_back(c);

    Dataset data;
    if (schema) {
        data.schema = *schema;
        if (schema->columns.size() != feature_columns.size())
            throw DataError("column count does not match the training schema");
        for (std::size_t j = 0; j < feature_columns.size(); ++j)
            if (options.has_header && header[feature_columns[j]] != schema->columns[j].name)
                throw DataError("column '" + header[feature_columns[j]] + "' does not match training column '" +
                                schema->columns[j].name + "'");
    } else {
        data.schema.label_name = header[label_index];
        for (std::size_t c : feature_columns) {
            ColumnInfo info{header[c], ColumnKind::numeric, {}};
            std::set<std::string> categories;
            for (const auto& row : records.rows) {
                if (is_missing(row[c])) continue;
                categories.insert(row[c]);
                if (!parse_number(row[c])) info.kind = ColumnKind::nominal;
            }
            if (info.kind == ColumnKind::nominal) info.categories.assign(categories.begin(), categories.end());
            data.schema.columns.push_back(std::move(info));
        }

        std::set<std::string> raw_labels;
        for (std::size_t r = 0; r < records.rows.size(); ++r) {
            const auto& value = records.rows[r][label_index];
            if (is_missing(value))
                throw DataError("row " + std::to_string(records.line_numbers[r]) + ": missing label");
            raw_labels.insert(value);
        }
        if (raw_labels.size() > 2)
            throw DataError("label column has " + std::to_string(raw_labels.size()) + " distinct values; expected 2");
        if (!options.positive_label && raw_labels.size() <= 2 &&
            std::all_of(raw_labels.begin(), raw_labels.end(), [](const std::string& v) { return v == "0" || v == "1"; })) {
            data.schema.label_values = {"0", "1"};
        } else if (options.positive_label) {
            raw_labels.erase(*options.positive_label);
            if (raw_labels.size() > 1) throw DataError("positive label not found among the label values");
            data.schema.label_values = {raw_labels.empty() ? std::string() : *raw_labels.begin(),
                                        *options.positive_label};
        } else {
            if (raw_labels.size() != 2)
                throw DataError("label column must contain exactly two values (use a positive label to override)");
            data.schema.label_values = {*raw_labels.begin(), *raw_labels.rbegin()};
        }
    }

    data.labeled = labeled;
    const std::size_t width = feature_columns.size();
    data.cells.reserve(records.rows.size() * width);
    data.labels.reserve(records.rows.size());
    for (std::size_t r = 0; r < records.rows.size(); ++r) {
        const auto& row = records.rows[r];
        const std::string where = "row " + std::to_string(records.line_numbers[r]);
        for (std::size_t j = 0; j < width; ++j) {
            const auto& text = row[feature_columns[j]];
            const auto& info = data.schema.columns[j];
            if (is_missing(text)) {
                data.cells.push_back(kMissing);
            } else if (info.kind == ColumnKind::numeric) {
                const auto value = parse_number(text);
                if (!value) throw DataError(where + ": column '" + info.name + "' is not numeric: '" + text + "'");
                data.cells.push_back(*value);
            } else {
                const auto it = std::lower_bound(info.categories.begin(), info.categories.end(), text);
                const bool known = it != info.categories.end() && *it == text;
                data.cells.push_back(known ? static_cast<double>(it - info.categories.begin()) : kMissing);
            }
        }
        if (!labeled) {
            data.labels.push_back(0);
            continue;
        }
        const auto& raw = row[label_index];
        if (raw == data.schema.label_values[1])
            data.labels.push_back(1);
        else if (raw == data.schema.label_values[0] && !raw.empty())
            data.labels.push_back(0);
        else
            throw DataError(where + ": unexpected label '" + raw + "'");
    }
    return data;
}

Dataset load_csv(const std::string& path, const CsvOptions& options, const Schema* schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    return read_csv(in, options, schema);
}

void write_csv(const Dataset& data, std::ostream& out) {
    for (const auto& column : data.schema.columns) out << column.name << ',';
    out << data.schema.label_name << '\n';
    for (std::size_t r = 0; r < data.rows(); ++r) {
        for (std::size_t c = 0; c < data.width(); ++c) {
            const double v = data.cell(r, c);
            const auto& info = data.schema.columns[c];
            if (std::isnan(v))
                out << '?';
            else if (info.kind == ColumnKind::nominal)
                out << info.categories[static_cast<std::size_t>(v)];
            else
                out << format_double(v);
            out << ',';
        }
        out << data.schema.label_values[static_cast<std::size_t>(data.labels[r])] << '\n';
    }
}

void save_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    write_csv(data, out);
    if (!out) throw DataError("failed writing '" + path + "'");
}

ImputationStats fit_imputation(const Dataset& train) {
    ImputationStats stats;
    stats.fill.resize(train.width(), 0.0);
    stats.source_rows = train.rows();
    stats.source_fingerprint = train.fingerprint();
    for (std::size_t c = 0; c < train.width(); ++c) {
        const auto& info = train.schema.columns[c];
        if (info.kind == ColumnKind::numeric) {
            double sum = 0.0;
            std::size_t count = 0;
            for (std::size_t r = 0; r < train.rows(); ++r) {
                const double v = train.cell(r, c);
                if (std::isnan(v)) continue;
                sum += v;
                ++count;
            }
            stats.fill[c] = count ? sum / static_cast<double>(count) : 0.0;
        } else {
            std::vector<std::size_t> counts(info.categories.size(), 0);
            for (std::size_t r = 0; r < train.rows(); ++r) {
                const double v = train.cell(r, c);
                if (!std::isnan(v)) ++counts[static_cast<std::size_t>(v)];
            }
            // max_element returns the first maximum: ties go to the lowest category.
            const auto it = std::max_element(counts.begin(), counts.end());
            stats.fill[c] = it == counts.end() ? 0.0 : static_cast<double>(it - counts.begin());
        }
    }
    return stats;
}

Dataset impute(const Dataset& data, const ImputationStats& stats) {
    if (stats.fill.size() != data.width()) throw DataError("imputation statistics do not match the dataset width");
    Dataset out = data;
    for (std::size_t r = 0; r < out.rows(); ++r)
        for (std::size_t c = 0; c < out.width(); ++c) {
            double& v = out.cells[r * out.width() + c];
            if (std::isnan(v)) v = stats.fill[c];
        }
    out.imputation = stats;
    return out;
}

FeatureMatrix encode(const Dataset& data) {
    FeatureMatrix out;
    out.rows = data.rows();
    out.cols = data.schema.encoded_width();
    out.values.assign(out.rows * out.cols, 0.0);
    for (std::size_t r = 0; r < data.rows(); ++r) {
        std::size_t offset = 0;
        double* dst = out.values.data() + r * out.cols;
        for (std::size_t c = 0; c < data.width(); ++c) {
            const auto& info = data.schema.columns[c];
            const double v = data.cell(r, c);
            if (std::isnan(v))
                throw DataError("row " + std::to_string(r) + ", column '" + info.name +
                                "' is missing; impute before encoding");
            if (info.kind == ColumnKind::numeric) {
                dst[offset++] = v;
            } else {
                dst[offset + static_cast<std::size_t>(v)] = 1.0;
                offset += info.categories.size();
            }
        }
    }
    return out;
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (spec.all_mode) {
        if (n == 0) throw DataError("cannot split an empty dataset");
        return {order, order};
    }
    if (spec.proper_parts < 1 || spec.calibration_parts < 1)
        throw UsageError("split ratio parts must both be at least 1");
    if (spec.seed) Rng::substream(*spec.seed, "split").shuffle(std::span<std::size_t>(order));

    const std::size_t parts = spec.proper_parts + spec.calibration_parts;
    const std::size_t proper =
        spec.proper_size ? *spec.proper_size : (spec.proper_parts * n + parts - 1) / parts;  // ceil(m n / (m+k))
    if (proper < 1 || proper >= n)
        throw DataError("split of " + std::to_string(n) + " rows leaves an empty proper training or calibration set");
    SplitIndices out;
    out.proper.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(proper));
    out.calibration.assign(order.begin() + static_cast<std::ptrdiff_t>(proper), order.end());
    return out;
}

std::pair<Dataset, Dataset> split_proper_calibration(const Dataset& data, const SplitSpec& spec) {
    const auto indices = split_indices(data.rows(), spec);
    return {data.subset(indices.proper), data.subset(indices.calibration)};
}

Dataset generate_synthetic(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw UsageError("synthetic dataset needs at least one row");
    Dataset data;
    data.schema.columns = {{"x", ColumnKind::numeric, {}}};
    data.schema.label_name = "y";
    data.schema.label_values = {"0", "1"};
    data.cells.reserve(n);
    data.labels.reserve(n);
    auto rng = Rng::substream(seed, "synthetic");
    for (std::size_t i = 0; i < n; ++i) {
        const int y = rng.uniform() < 0.5 ? 1 : 0;
        data.labels.push_back(y);
        data.cells.push_back(static_cast<double>(y) + rng.gaussian());
    }
    return data;
}

namespace {

std::vector<std::vector<std::string>> read_score_rows(const std::string& path, std::size_t columns) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_record(line, line_no);
        if (rows.empty() && line_no == 1 && !parse_number(fields.front())) continue;  // header
        if (fields.size() != columns)
            throw DataError(path + ": row " + std::to_string(line_no) + ": expected " + std::to_string(columns) +
                            " fields");
        rows.push_back(std::move(fields));
    }
    return rows;
}

double parse_score(const std::string& text, const std::string& path) {
    const auto value = parse_number(text);
    if (!value) throw DataError(path + ": score '" + text + "' is not a finite number");
    return *value;
}

}  // namespace

ScoredLabels read_calibration_scores(const std::string& path) {
    ScoredLabels out;
    for (const auto& row : read_score_rows(path, 2)) {
        out.scores.push_back(parse_score(row[0], path));
        if (row[1] != "0" && row[1] != "1") throw DataError(path + ": label '" + row[1] + "' is not 0 or 1");
        out.labels.push_back(row[1] == "1" ? 1 : 0);
    }
    if (out.scores.empty()) throw DataError(path + ": no calibration scores");
    return out;
}

std::vector<double> read_test_scores(const std::string& path) {
    std::vector<double> out;
    for (const auto& row : read_score_rows(path, 1)) out.push_back(parse_score(row[0], path));
    return out;
}

void write_calibration_scores(const std::string& path, std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw DataError("scores and labels differ in length");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "score,label\n";
    for (std::size_t i = 0; i < scores.size(); ++i) out << format_double(scores[i]) << ',' << labels[i] << '\n';
}

void write_test_scores(const std::string& path, std::span<const double> scores) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "score\n";
    for (double s : scores) out << format_double(s) << '\n';
}

std::vector<double> read_numeric_column(const std::string& path, const std::string& column) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");
    const Records records = read_records(in, true);
    std::size_t index = records.header.size() - 1;
    if (!column.empty()) {
        const auto it = std::find(records.header.begin(), records.header.end(), column);
        if (it == records.header.end()) throw DataError(path + ": no column '" + column + "'");
        index = static_cast<std::size_t>(it - records.header.begin());
    }
    std::vector<double> out;
    out.reserve(records.rows.size());
    for (std::size_t r = 0; r < records.rows.size(); ++r) {
        const auto value = parse_number(records.rows[r][index]);
        if (!value)
            throw DataError(path + ": row " + std::to_string(records.line_numbers[r]) + ": '" +
                            records.rows[r][index] + "' is not a finite number");
        out.push_back(*value);
    }
    return out;
}

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    return std::string(buffer, ptr);
}

}  // namespace vennabers
