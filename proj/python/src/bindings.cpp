#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "vennabers/baselines.hpp"
#include "vennabers/cli.hpp"
#include "vennabers/cvap.hpp"
#include "vennabers/data.hpp"
#include "vennabers/error.hpp"
#include "vennabers/isotonic.hpp"
#include "vennabers/ivap.hpp"
#include "vennabers/merging.hpp"
#include "vennabers/metrics.hpp"
#include "vennabers/serialize.hpp"

namespace py = pybind11;
using namespace vennabers;

namespace {

std::vector<ProbInterval> to_intervals(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<ProbInterval> out;
    out.reserve(pairs.size());
    for (const auto& [p0, p1] : pairs) out.push_back({p0, p1});
    return out;
}

MergeLoss loss_arg(const std::string& name) { return parse_merge_loss(name); }

}  // namespace

PYBIND11_MODULE(_vennabers, m) {
    m.doc() = "Venn-Abers probability calibration";
    m.attr("__version__") = kVersion;

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<UsageError>(m, "UsageError", base.ptr());
    py::register_exception<DataError>(m, "DataError", base.ptr());
    py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());

    py::class_<IvapRule>(m, "IvapRule")
        .def_static("build", [](const std::vector<double>& s, const std::vector<int>& y) { return IvapRule::build(s, y); },
                    py::arg("scores"), py::arg("labels"))
        .def("predict_interval",
             [](const IvapRule& r, double s) {
                 const auto iv = r.predict_interval(s);
                 return std::make_pair(iv.p0, iv.p1);
             },
             py::arg("score"))
        .def("predict_point", [](const IvapRule& r, double s, const std::string& loss) { return r.predict_point(s, loss_arg(loss)); },
             py::arg("score"), py::arg("loss") = "log")
        .def_property_readonly("scores", [](const IvapRule& r) { return r.points().scores; })
        .def_property_readonly("f0", [](const IvapRule& r) { return r.f().f0; })
        .def_property_readonly("f1", [](const IvapRule& r) { return r.f().f1; })
        .def_property_readonly("count_ones", &IvapRule::count_ones)
        .def_property_readonly("count_zeros", &IvapRule::count_zeros)
        .def("to_json", [](const IvapRule& r) { return ivap_to_json(r); })
        .def_static("from_json", [](const std::string& text) { return ivap_from_json(text); });

    m.def("build_ivap", [](const std::vector<double>& s, const std::vector<int>& y) { return IvapRule::build(s, y); },
          py::arg("scores"), py::arg("labels"));

    m.def("compute_f_vectors",
          [](const std::vector<double>& s, const std::vector<int>& y) {
              const auto f = compute_f_vectors(dedup_weighted(s, y));
              return std::make_pair(f.f0, f.f1);
          },
          py::arg("scores"), py::arg("labels"), "F0 and F1 at the distinct sorted calibration scores");
    m.def("fit_isotonic",
          [](const std::vector<double>& s, const std::vector<int>& y) {
              const auto p = dedup_weighted(s, y);
              return std::make_pair(p.scores, fit_isotonic(p));
          },
          py::arg("scores"), py::arg("labels"), "Distinct sorted scores and their isotonic fit");

    m.def("merge",
          [](const std::vector<std::pair<double, double>>& batch, const std::string& loss) {
              return merge(to_intervals(batch), loss_arg(loss));
          },
          py::arg("intervals"), py::arg("loss") = "log");

    py::class_<PlattModel>(m, "PlattModel")
        .def_readonly("a", &PlattModel::a)
        .def_readonly("b", &PlattModel::b)
        .def_readonly("k_plus", &PlattModel::k_plus)
        .def_readonly("k_minus", &PlattModel::k_minus)
        .def("predict", &predict_platt, py::arg("score"))
        .def("to_json", [](const PlattModel& p) { return platt_to_json(p); });
    m.def("fit_platt", [](const std::vector<double>& s, const std::vector<int>& y) { return fit_platt(s, y); },
          py::arg("scores"), py::arg("labels"));

    py::class_<DirIsoModel>(m, "DirectIsotonicModel")
        .def_readonly("scores", &DirIsoModel::scores)
        .def_readonly("fitted", &DirIsoModel::fitted)
        .def("predict", &predict_direct, py::arg("score"));
    m.def("fit_direct_isotonic",
          [](const std::vector<double>& s, const std::vector<int>& y, bool dummy) {
              return fit_direct_isotonic(s, y, DirectIsotonicOptions{dummy});
          },
          py::arg("scores"), py::arg("labels"), py::arg("dummy_observations") = false);

    m.def("predict_cvap_scores",
          [](const std::vector<IvapRule>& rules, const std::vector<double>& scores, const std::string& loss) {
              return predict_cvap_scores(rules, scores, loss_arg(loss));
          },
          py::arg("rules"), py::arg("scores"), py::arg("loss") = "log",
          "CVAP prediction from per-fold rules and the test object's per-fold scores");

    m.def("evaluate",
          [](const std::vector<double>& p, const std::vector<int>& y) {
              const auto r = evaluate(p, y);
              py::dict d;
              d["n"] = r.n;
              d["mll"] = r.mean_log_loss;
              d["mbl"] = r.mean_brier_loss;
              d["infinite_log_losses"] = r.infinite_log_losses;
              return d;
          },
          py::arg("predictions"), py::arg("labels"));

    m.def("generate_synthetic",
          [](std::size_t n, std::uint64_t seed) {
              const auto d = generate_synthetic(n, seed);
              return std::make_pair(d.cells, d.labels);
          },
          py::arg("n"), py::arg("seed"), "x = y + N(0,1) with y ~ Bernoulli(1/2); returns (x, y)");

    m.def("run_cli",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              const int code = run_cli(args, out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Runs the vacal command line; returns (exit code, stdout, stderr)");
}
