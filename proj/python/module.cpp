#include "eds/prolong.hpp"
#include "eds/solutions.hpp"
#include "eds/tanaka.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace eds;

namespace {

Env env_from_dict(const py::dict& d) {
    Env env;
    const Chart chart = j2_chart();
    for (const auto& c : chart.coords()) env[c] = 0.0;
    for (auto item : d) env[py::cast<std::string>(item.first)] = py::cast<double>(item.second);
    return env;
}

Curve curve_from_arg(const py::object& obj, const std::string& var) {
    if (py::isinstance<py::str>(obj))
        return Curve::polynomial(parse_expr(py::cast<std::string>(obj), Chart({var})), var);
    const py::tuple t = py::cast<py::tuple>(obj);
    return Curve::tabulated(py::cast<std::vector<double>>(t[0]),
                            py::cast<std::vector<double>>(t[1]));
}

} // namespace

PYBIND11_MODULE(edspy, m) {
    m.doc() = "rank-2 prolongations and singular solutions of second-order equations";

    py::enum_<PdeClass>(m, "PdeClass")
        .value("HYPERBOLIC", PdeClass::Hyperbolic)
        .value("PARABOLIC", PdeClass::Parabolic)
        .value("ELLIPTIC", PdeClass::Elliptic)
        .value("DEGENERATE", PdeClass::Degenerate)
        .value("NONREGULAR", PdeClass::NonRegular);

    m.def("class_name", &pde_class_name);

    py::class_<Pde>(m, "Pde")
        .def(py::init([](const std::string& name, const std::string& F) {
                 return Pde(name, parse_expr(F, j2_chart()));
             }),
             py::arg("name"), py::arg("F"))
        .def_property_readonly("name", &Pde::name)
        .def("__repr__", [](const Pde& p) { return "Pde(" + p.name() + ": " + p.F().str() + ")"; });

    m.def("model_pde", &model_pde, py::arg("cls"));

    py::class_<ClassifyResult>(m, "ClassifyResult")
        .def_readonly("cls", &ClassifyResult::cls)
        .def_readonly("delta", &ClassifyResult::delta)
        .def_readonly("grad_norm", &ClassifyResult::grad_norm)
        .def_readonly("near_threshold", &ClassifyResult::near_threshold)
        .def("__repr__", [](const ClassifyResult& r) {
            return "ClassifyResult(" + pde_class_name(r.cls) +
                   ", delta=" + std::to_string(r.delta) + ")";
        });

    m.def(
        "classify",
        [](const Pde& pde, const py::dict& point, double tol) {
            return classify_point(pde, env_from_dict(point), tol);
        },
        py::arg("pde"), py::arg("point"), py::arg("tol") = 1e-9);

    py::class_<FiberReport>(m, "FiberReport")
        .def_property_readonly("topology",
                               [](const FiberReport& r) { return fiber_topology_name(r.topology); })
        .def_property_readonly("signature",
                               [](const FiberReport& r) {
                                   return py::make_tuple(r.sig.pos, r.sig.neg, r.sig.zero);
                               })
        .def_readonly("Q", &FiberReport::Q)
        .def_readonly("note", &FiberReport::note);

    m.def(
        "fiber",
        [](const Pde& pde, const py::dict& point, double tol) {
            return fiber_topology(induced_distribution(pde, env_from_dict(point), tol), tol);
        },
        py::arg("pde"), py::arg("point"), py::arg("tol") = 1e-9);

    m.def(
        "chart_table",
        [](PdeClass cls) {
            py::list out;
            for (const auto& fc : reference_fiber_charts(cls)) {
                py::dict row;
                row["id"] = fc.id;
                row["labels"] = fc.labels;
                row["f1"] = fc.f1.str();
                row["f2"] = fc.f2.str();
                row["empty"] = fc.empty;
                out.append(row);
            }
            return out;
        },
        py::arg("cls"));

    m.def(
        "derived_dims",
        [](PdeClass cls, const std::string& chart, double u, double v, bool small_growth) {
            const PfaffianChart pc = prolonged_model_chart(cls, chart);
            Eigen::VectorXd x = Eigen::VectorXd::Zero(pc.dim());
            x(pc.chart.index_of("u1")) = u;
            x(pc.chart.index_of("v1")) = v;
            return derived_flag(pc, x, small_growth).dims;
        },
        py::arg("cls"), py::arg("chart"), py::arg("u"), py::arg("v"),
        py::arg("small_growth") = true);

    m.def(
        "symbol_dims",
        [](PdeClass cls, const std::string& chart, double u, double v) {
            const PfaffianChart pc = prolonged_model_chart(cls, chart);
            Eigen::VectorXd x = Eigen::VectorXd::Zero(pc.dim());
            x(pc.chart.index_of("u1")) = u;
            x(pc.chart.index_of("v1")) = v;
            return symbol_algebra(pc, x, canonical_levels(pc)).graded_dims;
        },
        py::arg("cls"), py::arg("chart"), py::arg("u"), py::arg("v"));

    m.def(
        "stratum",
        [](PdeClass cls, const std::string& chart, double u, double v) {
            return stratum_name(prolonged_chart_stratum(cls, chart, u, v));
        },
        py::arg("cls"), py::arg("chart"), py::arg("u"), py::arg("v"));

    py::class_<VerificationReport>(m, "VerificationReport")
        .def_readonly("ok", &VerificationReport::pass)
        .def_readonly("max_residual", &VerificationReport::max_residual)
        .def_readonly("tol", &VerificationReport::tol)
        .def_readonly("per_generator", &VerificationReport::per_generator)
        .def("__repr__", [](const VerificationReport& r) {
            return std::string("VerificationReport(") + (r.pass ? "ok" : "FAIL") +
                   ", max_residual=" + std::to_string(r.max_residual) + ")";
        });

    py::class_<SolutionMap>(m, "SolutionMap")
        .def_readonly("cls", &SolutionMap::cls)
        .def_readonly("chart_id", &SolutionMap::chart_id)
        .def_readonly("params", &SolutionMap::params)
        .def(
            "component",
            [](const SolutionMap& s, int k, double u, double v) { return s.comp.at(k).f(u, v); },
            py::arg("k"), py::arg("u"), py::arg("v"))
        .def("verify", [](const SolutionMap& s, double tol) { return verify_solution(s, tol); },
             py::arg("tol") = 1e-9)
        .def("corank", [](const SolutionMap& s, double u, double v) { return corank_at(s, u, v); },
             py::arg("u"), py::arg("v"))
        .def("singular_points", [](const SolutionMap& s, int grid) {
                 py::list out;
                 for (const auto& sp : scan_singular(s, grid))
                     out.append(py::make_tuple(sp.u, sp.v, sp.corank));
                 return out;
             },
             py::arg("grid") = 61);

    m.def(
        "wave_solution_xt",
        [](const py::object& y, const py::object& z0) {
            return wave_solution_xt(curve_from_arg(y, "t"), curve_from_arg(z0, "x"));
        },
        py::arg("y"), py::arg("z0"));
    m.def(
        "wave_solution_rt",
        [](const py::object& x, const py::object& y) {
            return wave_solution_rt(curve_from_arg(x, "r"), curve_from_arg(y, "t"));
        },
        py::arg("x"), py::arg("y"));
    m.def(
        "parabolic_solution_st",
        [](const py::object& y, const py::object& x0) {
            return parabolic_solution_st(curve_from_arg(y, "s"), curve_from_arg(x0, "s"));
        },
        py::arg("y"), py::arg("x0"));
    m.def(
        "laplace_solution_rs",
        [](const std::string& y, const std::string& x, double cr_tol) {
            const Chart rs({"r", "s"});
            return laplace_solution_rs(parse_expr(y, rs), parse_expr(x, rs), cr_tol);
        },
        py::arg("y"), py::arg("x"), py::arg("cr_tol") = 1e-10);

    py::register_exception<ConstructionError>(m, "ConstructionError");
    py::register_exception<OffSurface>(m, "OffSurface");
    py::register_exception<NonRegularPoint>(m, "NonRegularPoint");
}
