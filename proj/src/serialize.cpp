#include "vennabers/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vennabers/error.hpp"

namespace vennabers {

using json = nlohmann::json;

namespace {

const json& check_format(const json& doc, std::string_view format) {
    if (!doc.is_object() || doc.value("format", "") != format)
        throw DataError("expected a '" + std::string(format) + "' model file");
    if (doc.value("version", 0) != kFormatVersion)
        throw DataError("unsupported " + std::string(format) + " version " + doc.value("version", json()).dump());
    return doc;
}

json parse(std::string_view text, std::string_view format) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("malformed model file: ") + e.what());
    }
    check_format(doc, format);
    return doc;
}

template <typename T>
T field(const json& doc, const char* name) {
    try {
        return doc.at(name).get<T>();
    } catch (const json::exception& e) {
        throw DataError(std::string("model file field '") + name + "': " + e.what());
    }
}

json ivap_json(const IvapRule& rule) {
    const auto& pts = rule.points();
    return {{"format", "vennabers-ivap"}, {"version", kFormatVersion}, {"scores", pts.scores},
            {"weights", pts.weights},     {"mean_labels", pts.mean_labels},  {"f0", rule.f().f0},
            {"f1", rule.f().f1}};
}

IvapRule ivap_from(const json& doc) {
    WeightedScorePoints pts{field<std::vector<double>>(doc, "scores"), field<std::vector<std::int64_t>>(doc, "weights"),
                            field<std::vector<double>>(doc, "mean_labels")};
    FVectors f{field<std::vector<double>>(doc, "f0"), field<std::vector<double>>(doc, "f1")};
    return IvapRule::from_parts(std::move(pts), std::move(f));
}

json scorer_json(const TrainedScorer& s) {
    json doc{{"format", "vennabers-scorer"}, {"version", kFormatVersion}, {"kind", to_string(s.kind)},
             {"dimension", s.dimension}};
    switch (s.kind) {
        case ScorerKind::logistic:
            doc["weights"] = s.weights;
            doc["intercept"] = s.intercept;
            break;
        case ScorerKind::stump:
            doc["feature"] = s.feature;
            doc["threshold"] = s.threshold;
            doc["high_is_one"] = s.high_is_one;
            break;
        case ScorerKind::constant: doc["constant"] = s.constant; break;
    }
    return doc;
}

TrainedScorer scorer_from(const json& doc) {
    TrainedScorer s;
    s.kind = parse_scorer_kind(field<std::string>(doc, "kind"));
    s.dimension = field<std::size_t>(doc, "dimension");
    switch (s.kind) {
        case ScorerKind::logistic:
            s.weights = field<std::vector<double>>(doc, "weights");
            s.intercept = field<double>(doc, "intercept");
            if (s.weights.size() != s.dimension) throw DataError("scorer weights do not match its dimension");
            break;
        case ScorerKind::stump:
            s.feature = field<std::size_t>(doc, "feature");
            s.threshold = field<double>(doc, "threshold");
            s.high_is_one = field<bool>(doc, "high_is_one");
            if (s.feature >= s.dimension) throw DataError("stump feature index out of range");
            break;
        case ScorerKind::constant: s.constant = field<double>(doc, "constant"); break;
    }
    return s;
}

json spec_json(const ScorerSpec& spec) {
    return {{"kind", to_string(spec.kind)},
            {"learning_rate", spec.learning_rate},
            {"max_iterations", spec.max_iterations},
            {"ridge", spec.ridge},
            {"tolerance", spec.tolerance}};
}

ScorerSpec spec_from(const json& doc) {
    ScorerSpec spec;
    spec.kind = parse_scorer_kind(field<std::string>(doc, "kind"));
    spec.learning_rate = field<double>(doc, "learning_rate");
    spec.max_iterations = field<std::size_t>(doc, "max_iterations");
    spec.ridge = field<double>(doc, "ridge");
    spec.tolerance = field<double>(doc, "tolerance");
    return spec;
}

}  // namespace

std::string ivap_to_json(const IvapRule& rule) { return ivap_json(rule).dump(); }

IvapRule ivap_from_json(std::string_view text) { return ivap_from(parse(text, "vennabers-ivap")); }

std::string scorer_to_json(const TrainedScorer& scorer) { return scorer_json(scorer).dump(); }

TrainedScorer scorer_from_json(std::string_view text) { return scorer_from(parse(text, "vennabers-scorer")); }

std::string cvap_to_json(const CvapModel& model, MergeLoss merge) {
    const auto& a = model.assignment();
    json members = json::array();
    for (const auto& fold : model.folds()) members.push_back({{"scorer", scorer_json(fold.scorer)}, {"rule", ivap_json(fold.rule)}});
    json doc{{"format", "vennabers-cvap"},
             {"version", kFormatVersion},
             {"merge", to_string(merge)},
             {"folds", a.folds},
             {"mode", to_string(a.mode)},
             {"seed", a.seed ? json(*a.seed) : json(nullptr)},
             {"fold_of", a.fold_of},
             {"scorer_spec", spec_json(model.scorer_spec())},
             {"members", members}};
    return doc.dump();
}

CvapBundle cvap_from_json(std::string_view text) {
    const json doc = parse(text, "vennabers-cvap");
    FoldAssignment a;
    a.folds = field<std::size_t>(doc, "folds");
    a.mode = parse_fold_mode(field<std::string>(doc, "mode"));
    if (!doc.at("seed").is_null()) a.seed = field<std::uint64_t>(doc, "seed");
    a.fold_of = field<std::vector<std::size_t>>(doc, "fold_of");
    a.n = a.fold_of.size();
    for (std::size_t f : a.fold_of)
        if (f >= a.folds) throw DataError("fold id out of range in model file");

    const auto& members = doc.at("members");
    if (!members.is_array() || members.size() != a.folds) throw DataError("model file must hold one member per fold");
    std::vector<CvapFold> folds;
    for (std::size_t k = 0; k < a.folds; ++k) {
        const auto& m = members[k];
        auto rule = ivap_from(check_format(m.at("rule"), "vennabers-ivap"));
        auto scorer = scorer_from(check_format(m.at("scorer"), "vennabers-scorer"));
        folds.push_back({std::move(scorer), std::move(rule), a.complement(k), a.members(k)});
    }
    const auto spec = spec_from(doc.at("scorer_spec"));
    const auto merge = parse_merge_loss(field<std::string>(doc, "merge"));
    return {CvapModel(std::move(a), spec, std::move(folds)), merge};
}

std::string platt_to_json(const PlattModel& model) {
    return json{{"format", "vennabers-platt"}, {"version", kFormatVersion}, {"a", model.a},
                {"b", model.b},               {"k_plus", model.k_plus},     {"k_minus", model.k_minus}}
        .dump();
}

PlattModel platt_from_json(std::string_view text) {
    const json doc = parse(text, "vennabers-platt");
    PlattModel m;
    m.a = field<double>(doc, "a");
    m.b = field<double>(doc, "b");
    m.k_plus = field<std::int64_t>(doc, "k_plus");
    m.k_minus = field<std::int64_t>(doc, "k_minus");
    return m;
}

std::string direct_isotonic_to_json(const DirIsoModel& model) {
    return json{{"format", "vennabers-isotonic"},
                {"version", kFormatVersion},
                {"scores", model.scores},
                {"fitted", model.fitted}}
        .dump();
}

DirIsoModel direct_isotonic_from_json(std::string_view text) {
    const json doc = parse(text, "vennabers-isotonic");
    DirIsoModel m{field<std::vector<double>>(doc, "scores"), field<std::vector<double>>(doc, "fitted")};
    if (m.scores.size() != m.fitted.size() || m.scores.empty()) throw DataError("malformed isotonic model file");
    return m;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    // Write to a sibling temp file and rename so readers never see a partial file.
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot write '" + path + "'");
        out << text;
        if (!out) throw DataError("failed writing '" + path + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw DataError("cannot move output into '" + path + "'");
}

}  // namespace vennabers
