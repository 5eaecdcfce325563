#include "vennabers/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "vennabers/baselines.hpp"
#include "vennabers/cvap.hpp"
#include "vennabers/data.hpp"
#include "vennabers/error.hpp"
#include "vennabers/ivap.hpp"
#include "vennabers/metrics.hpp"
#include "vennabers/pipeline.hpp"
#include "vennabers/rng.hpp"
#include "vennabers/serialize.hpp"

namespace vennabers {

namespace {

using json = nlohmann::ordered_json;

struct DataArgs {
    std::string train;
    std::string test;
    std::string label;
    std::string positive;
    bool no_header = false;
    std::size_t synthetic_train = 0;
    std::size_t synthetic_test = 0;
};

struct MethodArgs {
    std::string ratio = "4:1";
    std::optional<std::size_t> folds;
    std::string merge = "log";
    std::string scorer = "logistic";
    double ridge = ScorerSpec{}.ridge;
    std::uint64_t seed = 0;
    bool all_mode = false;
    bool permute = false;
    bool tune = false;
    bool dummy = false;
};

void add_data_options(CLI::App& cmd, DataArgs& args) {
    cmd.add_option("--train", args.train, "Training CSV (features plus label column)");
    cmd.add_option("--test", args.test, "Test CSV; the label column is optional");
    cmd.add_option("--label", args.label, "Label column name (default: last column)");
    cmd.add_option("--positive", args.positive, "Raw label value treated as class 1");
    cmd.add_flag("--no-header", args.no_header, "CSV files have no header row");
    cmd.add_option("--synthetic-train", args.synthetic_train, "Generate N synthetic training rows instead");
    cmd.add_option("--synthetic-test", args.synthetic_test, "Generate N synthetic test rows instead");
}

void add_method_options(CLI::App& cmd, MethodArgs& args) {
    cmd.add_option("--ratio", args.ratio, "Proper training : calibration ratio m:k")->capture_default_str();
    cmd.add_option("--folds", args.folds, "CVAP fold count K (default m + k)");
    cmd.add_option("--merge", args.merge, "Merging loss for IVAP/CVAP: log or brier")->capture_default_str();
    cmd.add_option("--scorer", args.scorer, "Underlying scorer: logistic, stump or constant")->capture_default_str();
    cmd.add_option("--ridge", args.ridge, "Ridge penalty of the logistic scorer")->capture_default_str();
    cmd.add_option("--seed", args.seed, "Master seed")->capture_default_str();
    cmd.add_flag("--all-mode", args.all_mode, "Use all training rows as both proper training and calibration set");
    cmd.add_flag("--permute", args.permute, "Shuffle before splitting; randomized CVAP folds");
    cmd.add_flag("--tune", args.tune, "Choose the ridge penalty by Brier loss on held-out data");
    cmd.add_flag("--dummy-observations", args.dummy, "Regularize direct isotonic regression with two dummy points");
}

std::pair<std::size_t, std::size_t> parse_ratio(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("--ratio must look like m:k, got '" + text + "'");
    try {
        std::size_t used = 0;
        const std::string m_text = text.substr(0, colon), k_text = text.substr(colon + 1);
        const long long m = std::stoll(m_text, &used);
        if (used != m_text.size()) throw std::invalid_argument(m_text);
        const long long k = std::stoll(k_text, &used);
        if (used != k_text.size()) throw std::invalid_argument(k_text);
        if (m < 1 || k < 1) throw UsageError("--ratio m:k needs positive integers, got '" + text + "'");
        return {static_cast<std::size_t>(m), static_cast<std::size_t>(k)};
    } catch (const std::logic_error&) {
        throw UsageError("--ratio must look like m:k, got '" + text + "'");
    }
}

RunConfig make_config(const MethodArgs& args) {
    RunConfig config;
    std::tie(config.proper_parts, config.calibration_parts) = parse_ratio(args.ratio);
    config.folds = args.folds;
    config.merge = parse_merge_loss(args.merge);
    config.scorer.kind = parse_scorer_kind(args.scorer);
    config.scorer.ridge = args.ridge;
    config.seed = args.seed;
    config.all_mode = args.all_mode;
    config.permute = args.permute;
    config.tune = args.tune;
    config.dummy_observations = args.dummy;
    return config;
}

struct LoadedData {
    Dataset train;
    Dataset test;
};

LoadedData load_data(const DataArgs& args, std::uint64_t seed) {
    const bool synthetic = args.synthetic_train > 0 || args.synthetic_test > 0;
    if (synthetic) {
        if (!args.train.empty() || !args.test.empty())
            throw UsageError("use either --train/--test or --synthetic-train/--synthetic-test");
        if (args.synthetic_train == 0 || args.synthetic_test == 0)
            throw UsageError("--synthetic-train and --synthetic-test must both be positive");
        return {generate_synthetic(args.synthetic_train, derive_seed(seed, "train-data")),
                generate_synthetic(args.synthetic_test, derive_seed(seed, "test-data"))};
    }
    if (args.train.empty() || args.test.empty()) throw UsageError("--train and --test are required");
    CsvOptions options;
    options.has_header = !args.no_header;
    options.label_column = args.label;
    if (!args.positive.empty()) options.positive_label = args.positive;
    LoadedData data;
    data.train = load_csv(args.train, options);
    CsvOptions test_options = options;
    test_options.positive_label.reset();
    data.test = load_csv(args.test, test_options, &data.train.schema);
    return data;
}

std::uint64_t file_fingerprint(const std::string& path) {
    const std::string bytes = read_text_file(path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hex(std::uint64_t value) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << value;
    return out.str();
}

json input_record(const std::string& path) { return {{"path", path}, {"fnv1a64", hex(file_fingerprint(path))}}; }

json config_record(const RunConfig& config) {
    return {{"method", to_string(config.method)},
            {"ratio", std::to_string(config.proper_parts) + ":" + std::to_string(config.calibration_parts)},
            {"folds", config.fold_count()},
            {"merge", to_string(config.merge)},
            {"scorer", {{"kind", to_string(config.scorer.kind)},
                        {"ridge", config.scorer.ridge},
                        {"learning_rate", config.scorer.learning_rate},
                        {"max_iterations", config.scorer.max_iterations},
                        {"tolerance", config.scorer.tolerance}}},
            {"seed", config.seed},
            {"all_mode", config.all_mode},
            {"permute", config.permute},
            {"tune", config.tune},
            {"dummy_observations", config.dummy_observations}};
}

json data_record(const DataArgs& args) {
    json record;
    if (args.synthetic_train > 0) {
        record["synthetic"] = {{"train_rows", args.synthetic_train}, {"test_rows", args.synthetic_test}};
    } else {
        record["train"] = input_record(args.train);
        record["test"] = input_record(args.test);
        record["label"] = args.label;
        record["positive"] = args.positive;
        record["header"] = !args.no_header;
    }
    return record;
}

void write_manifest(const std::string& out_path, const std::string& command, const std::vector<std::string>& argv,
                    json body) {
    json manifest;
    manifest["tool"] = "vacal";
    manifest["version"] = kVersion;
    manifest["command"] = command;
    manifest["arguments"] = argv;
    for (auto& [key, value] : body.items()) manifest[key] = value;
    write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

// ---- synth ----

struct SynthArgs {
    long long n = 0;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_synth(const SynthArgs& args, std::ostream& out) {
    if (args.n < 1) throw UsageError("--n must be at least 1");
    const auto data = generate_synthetic(static_cast<std::size_t>(args.n), args.seed);
    std::ostringstream text;
    write_csv(data, text);
    write_text_file(args.out, text.str());
    out << "wrote " << data.rows() << " rows to " << args.out << "\n";
    return 0;
}

// ---- calibrate ----

struct CalibrateArgs {
    std::string method;
    DataArgs data;
    MethodArgs options;
    std::vector<std::string> calib_scores;
    std::vector<std::string> scores_in;
    std::string out;
    bool intervals = false;
    std::string model_out;
};

std::string interval_header(Method method, std::size_t count) {
    if (method == Method::ivap) return "p0,p1,p";
    std::string header;
    for (std::size_t k = 1; k <= count; ++k)
        header += "p0_" + std::to_string(k) + ",p1_" + std::to_string(k) + ",";
    return header + "p";
}

std::string prediction_text(const MethodResult& result, bool with_intervals) {
    const bool intervals = with_intervals && !result.intervals.empty();
    std::string text = intervals ? interval_header(result.method, result.intervals.front().size()) : "p";
    text += '\n';
    for (std::size_t r = 0; r < result.probabilities.size(); ++r) {
        if (intervals)
            for (const auto& interval : result.intervals[r])
                text += format_double(interval.p0) + "," + format_double(interval.p1) + ",";
        text += format_double(result.probabilities[r]) + "\n";
    }
    return text;
}

// Calibration of externally computed scores.
MethodResult calibrate_scores(const RunConfig& config, const CalibrateArgs& args, json& model) {
    const std::size_t files = args.calib_scores.size();
    if (files != args.scores_in.size())
        throw UsageError("give one --scores-in file per --calib-scores file");
    if (config.method == Method::cvap) {
        if (files < 2) throw UsageError("cvap needs one --calib-scores/--scores-in pair per fold (at least 2)");
        if (config.folds && *config.folds != files)
            throw UsageError("--folds " + std::to_string(*config.folds) + " but " + std::to_string(files) +
                             " score file pairs given");
    } else if (files != 1) {
        throw UsageError(to_string(config.method) + " takes exactly one --calib-scores and one --scores-in file");
    }

    std::vector<ScoredLabels> calibration;
    std::vector<std::vector<double>> tests;
    for (std::size_t f = 0; f < files; ++f) {
        calibration.push_back(read_calibration_scores(args.calib_scores[f]));
        tests.push_back(read_test_scores(args.scores_in[f]));
        if (tests.back().size() != tests.front().size())
            throw DataError("score files '" + args.scores_in.front() + "' and '" + args.scores_in[f] +
                            "' have different row counts");
    }

    MethodResult result;
    result.method = config.method;
    const auto& test = tests.front();
    result.probabilities.resize(test.size());
    result.calibration_size = calibration.front().scores.size();
    const auto& cal = calibration.front();
    switch (config.method) {
        case Method::underlying:
            for (std::size_t r = 0; r < test.size(); ++r) {
                if (!(test[r] >= 0.0 && test[r] <= 1.0))
                    throw DataError("underlying needs scores in [0, 1]; row " + std::to_string(r + 1) + " has " +
                                    format_double(test[r]));
                result.probabilities[r] = test[r];
            }
            break;
        case Method::platt: {
            const auto fitted = fit_platt(cal.scores, cal.labels);
            model = json::parse(platt_to_json(fitted));
            for (std::size_t r = 0; r < test.size(); ++r) result.probabilities[r] = predict_platt(fitted, test[r]);
            break;
        }
        case Method::isotonic: {
            const auto fitted = fit_direct_isotonic(cal.scores, cal.labels, {config.dummy_observations});
            model = json::parse(direct_isotonic_to_json(fitted));
            for (std::size_t r = 0; r < test.size(); ++r) result.probabilities[r] = predict_direct(fitted, test[r]);
            break;
        }
        case Method::ivap: {
            const auto rule = IvapRule::build(cal.scores, cal.labels);
            model = json::parse(ivap_to_json(rule));
            result.intervals.resize(test.size());
            for (std::size_t r = 0; r < test.size(); ++r) {
                const auto interval = rule.predict_interval(test[r]);
                result.intervals[r] = {interval};
                result.probabilities[r] = merge({&interval, 1}, config.merge);
            }
            break;
        }
        case Method::cvap: {
            std::vector<IvapRule> rules;
            model = json::array();
            for (const auto& fold : calibration) {
                rules.push_back(IvapRule::build(fold.scores, fold.labels));
                model.push_back(json::parse(ivap_to_json(rules.back())));
            }
            result.intervals.resize(test.size());
            std::vector<double> scores(files);
            for (std::size_t r = 0; r < test.size(); ++r) {
                for (std::size_t k = 0; k < files; ++k) {
                    scores[k] = tests[k][r];
                    result.intervals[r].push_back(rules[k].predict_interval(scores[k]));
                }
                result.probabilities[r] = predict_cvap_scores(rules, scores, config.merge);
            }
            break;
        }
    }
    return result;
}

// Everything needed to score new rows: fill values, scorer and calibrator.
json pipeline_model(const RunConfig& config, const MethodResult& result, const PreparedData& prepared) {
    json doc{{"format", "vennabers-pipeline"},
             {"version", kFormatVersion},
             {"method", to_string(config.method)},
             {"merge", to_string(config.merge)},
             {"imputation_fill", prepared.imputation.fill},
             {"encoded_width", prepared.train_x.cols},
             {"scorer", nullptr},
             {"calibrator", nullptr}};
    if (result.scorer) doc["scorer"] = json::parse(scorer_to_json(*result.scorer));
    if (result.platt) doc["calibrator"] = json::parse(platt_to_json(*result.platt));
    if (result.isotonic) doc["calibrator"] = json::parse(direct_isotonic_to_json(*result.isotonic));
    if (result.ivap) doc["calibrator"] = json::parse(ivap_to_json(*result.ivap));
    if (result.cvap) doc["calibrator"] = json::parse(cvap_to_json(*result.cvap, config.merge));
    return doc;
}

int cmd_calibrate(const CalibrateArgs& args, const std::vector<std::string>& argv, std::ostream& out) {
    RunConfig config = make_config(args.options);
    config.method = parse_method(args.method);
    config.validate();

    const bool score_mode = !args.calib_scores.empty() || !args.scores_in.empty();
    MethodResult result;
    json manifest;
    json model;
    if (score_mode) {
        if (!args.data.train.empty() || !args.data.test.empty() || args.data.synthetic_train > 0)
            throw UsageError("score files and feature data cannot be combined");
        result = calibrate_scores(config, args, model);
        json inputs = json::array();
        for (std::size_t f = 0; f < args.calib_scores.size(); ++f)
            inputs.push_back({{"calibration", input_record(args.calib_scores[f])},
                              {"test", input_record(args.scores_in[f])}});
        manifest["score_files"] = inputs;
    } else {
        const auto data = load_data(args.data, config.seed);
        const auto prepared = prepare(data.train, data.test);
        result = run_method(config, prepared.train_x, prepared.train_labels, prepared.test_x);
        manifest["data"] = data_record(args.data);
        manifest["data"]["train_rows"] = data.train.rows();
        manifest["data"]["test_rows"] = data.test.rows();
        manifest["data"]["imputed_train_cells"] = data.train.missing_count();
        if (!args.model_out.empty()) model = pipeline_model(config, result, prepared);
    }
    manifest["config"] = config_record(config);
    manifest["split"] = {{"proper_training", result.proper_size}, {"calibration", result.calibration_size}};

    write_text_file(args.out, prediction_text(result, args.intervals));
    if (!args.model_out.empty()) {
        if (model.is_null()) throw UsageError("method '" + args.method + "' has no model to save");
        write_text_file(args.model_out, model.dump(2) + "\n");
        manifest["model"] = args.model_out;
    }
    manifest["output"] = {{"path", args.out}, {"rows", result.probabilities.size()}, {"intervals", args.intervals}};
    write_manifest(args.out, "calibrate", argv, manifest);
    out << "wrote " << result.probabilities.size() << " predictions to " << args.out << "\n";
    return 0;
}

// ---- evaluate ----

struct EvaluateArgs {
    std::string pred;
    std::string truth;
    std::string column = "p";
    std::string label;
    std::string json_out;
};

std::string format_loss(double value) {
    if (std::isinf(value)) return "inf";
    std::ostringstream text;
    text << std::fixed << std::setprecision(6) << value;
    return text.str();
}

json report_record(const EvalReport& report) {
    json record;
    record["n"] = report.n;
    record["mll"] = std::isinf(report.mean_log_loss) ? json("inf") : json(report.mean_log_loss);
    record["mbl"] = report.mean_brier_loss;
    record["infinite_log_losses"] = report.infinite_log_losses;
    return record;
}

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out) {
    const auto predictions = read_numeric_column(args.pred, args.column);
    CsvOptions options;
    options.label_column = args.label;
    const auto truth = load_csv(args.truth, options);
    std::vector<int> labels = truth.labels;
    if (predictions.size() != labels.size())
        throw DataError("'" + args.pred + "' has " + std::to_string(predictions.size()) + " rows but '" + args.truth +
                        "' has " + std::to_string(labels.size()));
    const auto report = evaluate(predictions, labels);
    out << "n\t" << report.n << "\n";
    out << "MLL\t" << format_loss(report.mean_log_loss) << "\n";
    out << "MBL\t" << format_loss(report.mean_brier_loss) << "\n";
    out << "infinite\t" << report.infinite_log_losses << "\n";
    if (!args.json_out.empty()) write_text_file(args.json_out, report_record(report).dump(2) + "\n");
    return 0;
}

// ---- compare ----

struct CompareArgs {
    DataArgs data;
    MethodArgs options;
    std::string out;
};

std::string table_csv(const std::vector<ComparisonRow>& rows) {
    std::string text = "method,mll,mbl,infinite_log_losses,n\n";
    for (const auto& row : rows)
        text += to_string(row.method) + "," + format_double(row.report.mean_log_loss) + "," +
                format_double(row.report.mean_brier_loss) + "," + std::to_string(row.report.infinite_log_losses) +
                "," + std::to_string(row.report.n) + "\n";
    return text;
}

std::string table_text(const std::vector<ComparisonRow>& rows) {
    std::ostringstream text;
    text << std::left << std::setw(12) << "method" << std::right << std::setw(12) << "MLL" << std::setw(12) << "MBL"
         << std::setw(10) << "inf" << std::setw(10) << "n" << "\n";
    for (const auto& row : rows)
        text << std::left << std::setw(12) << to_string(row.method) << std::right << std::setw(12)
             << format_loss(row.report.mean_log_loss) << std::setw(12) << format_loss(row.report.mean_brier_loss)
             << std::setw(10) << row.report.infinite_log_losses << std::setw(10) << row.report.n << "\n";
    return text.str();
}

int cmd_compare(const CompareArgs& args, const std::vector<std::string>& argv, std::ostream& out) {
    RunConfig config = make_config(args.options);
    config.validate();
    const auto data = load_data(args.data, config.seed);
    if (!data.test.labeled) throw DataError("compare needs a labelled test set");
    const auto prepared = prepare(data.train, data.test);
    const auto rows = compare_methods(config, prepared);

    const std::string text = table_text(rows);
    write_text_file(args.out, table_csv(rows));
    write_text_file(args.out + ".txt", text);
    json manifest;
    manifest["data"] = data_record(args.data);
    manifest["data"]["train_rows"] = data.train.rows();
    manifest["data"]["test_rows"] = data.test.rows();
    manifest["config"] = config_record(config);
    manifest["config"].erase("method");
    json methods = json::array();
    for (const auto& row : rows) methods.push_back(to_string(row.method));
    manifest["methods"] = methods;
    manifest["results"] = json::array();
    for (const auto& row : rows) {
        auto record = report_record(row.report);
        record["method"] = to_string(row.method);
        manifest["results"].push_back(record);
    }
    manifest["output"] = {{"csv", args.out}, {"text", args.out + ".txt"}};
    write_manifest(args.out, "compare", argv, manifest);
    out << text;
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Venn-Abers probability calibration", "vacal"};
    app.set_version_flag("--version", std::string("vacal ") + kVersion);
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset: x = y + N(0,1), y ~ Bernoulli(1/2)");
    synth_cmd->add_option("--n", synth.n, "Number of rows")->required();
    synth_cmd->add_option("--seed", synth.seed, "Seed")->capture_default_str();
    synth_cmd->add_option("--out", synth.out, "Output CSV")->required();

    CalibrateArgs calibrate;
    auto* calibrate_cmd = app.add_subcommand("calibrate", "Train, calibrate and predict test probabilities");
    calibrate_cmd->add_option("--method", calibrate.method, "underlying, platt, isotonic, ivap or cvap")->required();
    add_data_options(*calibrate_cmd, calibrate.data);
    add_method_options(*calibrate_cmd, calibrate.options);
    calibrate_cmd->add_option("--calib-scores", calibrate.calib_scores,
                              "score,label file of an external model (once per fold for cvap)");
    calibrate_cmd->add_option("--scores-in", calibrate.scores_in,
                              "Test score file of an external model (once per fold for cvap)");
    calibrate_cmd->add_option("--out", calibrate.out, "Prediction CSV")->required();
    calibrate_cmd->add_flag("--intervals", calibrate.intervals, "Also write the p0,p1 intervals");
    calibrate_cmd->add_option("--model-out", calibrate.model_out, "Save the fitted calibrator as JSON");

    EvaluateArgs evaluate_args;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Mean log loss and mean Brier loss of predictions");
    evaluate_cmd->add_option("--pred", evaluate_args.pred, "Prediction CSV")->required();
    evaluate_cmd->add_option("--truth", evaluate_args.truth, "CSV holding the true labels")->required();
    evaluate_cmd->add_option("--column", evaluate_args.column, "Prediction column")->capture_default_str();
    evaluate_cmd->add_option("--label", evaluate_args.label, "Label column (default: last column)");
    evaluate_cmd->add_option("--json", evaluate_args.json_out, "Also write the report as JSON");

    CompareArgs compare;
    auto* compare_cmd = app.add_subcommand("compare", "Run every method on the same data and tabulate the losses");
    add_data_options(*compare_cmd, compare.data);
    add_method_options(*compare_cmd, compare.options);
    compare_cmd->add_option("--out", compare.out, "Table CSV (an aligned copy goes to <out>.txt)")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << "vacal " << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "vacal: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*synth_cmd) return cmd_synth(synth, out);
        if (*calibrate_cmd) return cmd_calibrate(calibrate, args, out);
        if (*evaluate_cmd) return cmd_evaluate(evaluate_args, out);
        if (*compare_cmd) return cmd_compare(compare, args, out);
    } catch (const UsageError& e) {
        err << "vacal: usage error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        err << "vacal: data error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateError& e) {
        err << "vacal: degenerate model: " << e.what() << "\n";
        return 4;
    } catch (const nlohmann::json::exception& e) {
        err << "vacal: data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "vacal: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace vennabers
