#include "eds/prolong.hpp"
#include "eds/solutions.hpp"
#include "eds/tanaka.hpp"
#include "eds/tomlmini.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>

using nlohmann::ordered_json;

namespace eds {
namespace {

struct RunConfig {
    double tol_rank = 1e-9;
    double tol_residual = 1e-9;
    uint64_t seed = 42;
    long oracle_samples = 100000;
    std::string json_out;
};

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--tol-rank", cfg.tol_rank, "numeric rank / threshold tolerance");
    cmd->add_option("--tol-residual", cfg.tol_residual, "surface and pullback residual tolerance");
    cmd->add_option("--seed", cfg.seed, "oracle RNG seed");
    cmd->add_option("--oracle-samples", cfg.oracle_samples, "minimum mesh oracle cell count");
    cmd->add_option("--json-out", cfg.json_out, "write the JSON result to this file");
}

void emit(const RunConfig& cfg, const ordered_json& j) {
    if (cfg.json_out.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(cfg.json_out);
    if (!out) throw std::runtime_error("cannot write '" + cfg.json_out + "'");
    out << j.dump(2) << "\n";
}

PdeClass model_class(const std::string& name) {
    if (name == "wave" || name == "hyperbolic") return PdeClass::Hyperbolic;
    if (name == "parabolic-model" || name == "parabolic") return PdeClass::Parabolic;
    if (name == "laplace" || name == "elliptic") return PdeClass::Elliptic;
    throw std::invalid_argument("unknown model '" + name +
                                "' (expected wave, parabolic-model or laplace)");
}

Rational parse_rational(const std::string& text) {
    const size_t slash = text.find('/');
    if (slash == std::string::npos) return Rational::parse_decimal(text);
    return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
}

ordered_json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return ordered_json::parse(in);
}

// point files are JSON objects keyed by coordinate name; unlisted coordinates
// are zero, values may be numbers or rational strings like "3/4" or "0.25"
Env load_point(const std::string& path, const Chart& chart) {
    Env env;
    for (const auto& c : chart.coords()) env[c] = 0.0;
    if (path.empty()) return env;
    const ordered_json j = load_json_file(path);
    if (!j.is_object()) throw std::invalid_argument("point file must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        if (chart.index_of(k) < 0)
            throw std::invalid_argument("point key '" + k + "' is not a chart coordinate");
        env[k] = v.is_string() ? parse_rational(v.get<std::string>()).to_double()
                               : v.get<double>();
    }
    return env;
}

ExactEnv load_point_exact(const std::string& path, const Chart& chart) {
    ExactEnv env;
    for (const auto& c : chart.coords()) env[c] = Rational();
    if (path.empty()) return env;
    const ordered_json j = load_json_file(path);
    for (const auto& [k, v] : j.items()) {
        if (chart.index_of(k) < 0)
            throw std::invalid_argument("point key '" + k + "' is not a chart coordinate");
        if (v.is_string())
            env[k] = parse_rational(v.get<std::string>());
        else if (v.is_number_integer())
            env[k] = Rational(v.get<long long>());
        else
            env[k] = Rational::parse_decimal(v.dump());
    }
    return env;
}

Pde load_pde(const std::string& path) {
    const toml::Table t = toml::parse_file(path);
    return Pde(t.get_string_or("name", "pde"), parse_expr(t.get_string("F"), j2_chart()));
}

ordered_json env_json(const Chart& chart, const Env& env) {
    ordered_json j = ordered_json::object();
    for (const auto& c : chart.coords()) j[c] = env.at(c);
    return j;
}

ordered_json point_json(const Chart& chart, const Eigen::VectorXd& x) {
    ordered_json j = ordered_json::object();
    for (int i = 0; i < chart.dim(); ++i) j[chart.coord(i)] = x(i);
    return j;
}

int stratum_index(Stratum s) {
    return s == Stratum::S0 ? 0 : (s == Stratum::S1 ? 1 : 2);
}

// ---- classify ----

struct ClassifyOpts {
    std::string pde_file, point_file;
    bool exact = false;
};

int run_classify(const RunConfig& cfg, const ClassifyOpts& o) {
    const Pde pde = load_pde(o.pde_file);
    ordered_json j;
    j["schema"] = "eds.classify/1";
    j["pde"] = pde.name();
    ClassifyResult res;
    if (o.exact) {
        const ExactEnv ex = load_point_exact(o.point_file, j2_chart());
        res = classify_point_exact(pde, ex);
        Env env;
        for (const auto& [k, v] : ex) env[k] = v.to_double();
        j["point"] = env_json(j2_chart(), env);
    } else {
        const Env env = load_point(o.point_file, j2_chart());
        res = classify_point(pde, env, cfg.tol_rank, cfg.tol_residual);
        j["point"] = env_json(j2_chart(), env);
    }
    j["class"] = pde_class_name(res.cls);
    j["delta"] = res.delta;
    j["grad_norm"] = res.grad_norm;
    j["near_threshold"] = res.near_threshold;
    if (res.exact) j["delta_exact"] = res.delta_exact.str();
    emit(cfg, j);
    return res.cls == PdeClass::NonRegular ? 2 : 0;
}

// ---- rank4-type ----

struct PointCmdOpts {
    std::string pde_file, point_file;
};

int run_rank4(const RunConfig& cfg, const PointCmdOpts& o) {
    const Pde pde = load_pde(o.pde_file);
    const Env env = load_point(o.point_file, j2_chart());
    const DistributionSample s = induced_distribution(pde, env, cfg.tol_rank);
    const Rank4Type rt = rank4_type(s, cfg.tol_rank);
    ordered_json j;
    j["schema"] = "eds.rank4/1";
    j["pde"] = pde.name();
    j["point"] = env_json(j2_chart(), env);
    j["class"] = pde_class_name(rt.cls);
    j["pencil"] = {{"alpha", rt.coeffs.alpha},
                   {"beta", rt.coeffs.beta},
                   {"gamma", rt.coeffs.gamma},
                   {"discriminant", rt.disc}};
    j["active"] = {rt.active[0], rt.active[1]};
    j["near_threshold"] = rt.near_threshold;
    emit(cfg, j);
    return 0;
}

// ---- fiber ----

struct FiberOpts : PointCmdOpts {
    bool oracle = false;
};

int run_fiber(const RunConfig& cfg, const FiberOpts& o) {
    const Pde pde = load_pde(o.pde_file);
    const Env env = load_point(o.point_file, j2_chart());
    const ClassifyResult cr = classify_point(pde, env, cfg.tol_rank, cfg.tol_residual);
    const DistributionSample s = induced_distribution(pde, env, cfg.tol_rank);
    const FiberReport fr = fiber_topology(s, cfg.tol_rank);
    ordered_json j;
    j["schema"] = "eds.fiber/1";
    j["pde"] = pde.name();
    j["point"] = env_json(j2_chart(), env);
    j["class"] = pde_class_name(cr.cls);
    j["delta"] = cr.delta;
    j["signature"] = {fr.sig.pos, fr.sig.neg, fr.sig.zero};
    j["topology"] = fiber_topology_name(fr.topology);
    ordered_json dirs = ordered_json::array();
    for (const auto& d : fr.singular_dirs) {
        ordered_json row = ordered_json::array();
        for (int i = 0; i < 6; ++i) row.push_back(d(i));
        dirs.push_back(row);
    }
    j["singular_directions"] = dirs;
    if (!fr.note.empty()) j["note"] = fr.note;
    if (o.oracle) {
        const MeshReport m = fiber_mesh_oracle(fr.Q, cfg.oracle_samples, cfg.seed);
        j["mesh"] = {{"euler_cover", m.euler_cover},
                     {"euler_quotient", m.euler_quotient},
                     {"components_cover", m.components_cover},
                     {"components_quotient", m.components_quotient},
                     {"singular_pairs", m.singular_pairs},
                     {"vertices", m.vertices},
                     {"triangles", m.triangles},
                     {"subdivisions", m.subdivisions}};
    }
    emit(cfg, j);
    return 0;
}

// ---- charts ----

struct ModelOpts {
    std::string model;
};

int run_charts(const RunConfig& cfg, const ModelOpts& o) {
    const PdeClass cls = model_class(o.model);
    const auto charts = reference_fiber_charts(cls);
    ordered_json j;
    j["schema"] = "eds.charts/1";
    j["model"] = model_pde(cls).name();
    j["class"] = pde_class_name(cls);
    ordered_json arr = ordered_json::array();
    for (const auto& fc : charts) {
        ordered_json c;
        c["id"] = fc.id;
        c["labels"] = fc.labels;
        c["f1"] = fc.f1.str();
        c["f2"] = fc.f2.str();
        c["empty"] = fc.empty;
        arr.push_back(c);
    }
    j["charts"] = arr;
    ordered_json cov = ordered_json::array();
    for (int i : covering_subatlas(cls)) cov.push_back(charts[i].id);
    j["covering_subatlas"] = cov;
    j["expected_topology"] = fiber_topology_name(expected_topology(cls));
    emit(cfg, j);
    return 0;
}

// ---- prolong ----

struct ProlongOpts : ModelOpts {
    std::string chart = "I";
    int level = 1;
};

int run_prolong(const RunConfig& cfg, const ProlongOpts& o) {
    const PdeClass cls = model_class(o.model);
    if (o.level < 1) throw std::invalid_argument("--level must be at least 1");
    if (o.level > 1 && o.chart != "I")
        throw std::invalid_argument("tower continuation is only wired through chart I");
    PfaffianChart pc = prolonged_model_chart(cls, o.chart);
    std::vector<int> dims{7, pc.dim()};
    for (int lvl = 2; lvl <= o.level; ++lvl) {
        pc = prolong_rank4(pc, cls, lvl);
        dims.push_back(pc.dim());
    }
    ordered_json j;
    j["schema"] = "eds.prolong/1";
    j["model"] = model_pde(cls).name();
    j["class"] = pde_class_name(cls);
    j["chart"] = o.chart;
    j["level"] = o.level;
    j["dims"] = dims;
    j["coordinates"] = pc.chart.coords();
    j["generators"] = pc.gen_labels;
    j["complement"] = pc.comp_labels;
    emit(cfg, j);
    return 0;
}

// ---- symbol / derived ----

struct FiberPointOpts : ModelOpts {
    std::string chart = "I";
    std::string point_file;
    double u = 0, v = 0;
    bool full_pairs = false;
};

Eigen::VectorXd fiber_point(const PfaffianChart& pc, const FiberPointOpts& o) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(pc.dim());
    if (!o.point_file.empty()) {
        const Env env = load_point(o.point_file, pc.chart);
        for (int i = 0; i < pc.dim(); ++i) x(i) = env.at(pc.chart.coord(i));
    }
    const int iu = pc.chart.index_of("u1"), iv = pc.chart.index_of("v1");
    if (o.u != 0 || o.point_file.empty()) x(iu) = o.u;
    if (o.v != 0 || o.point_file.empty()) x(iv) = o.v;
    return x;
}

int run_symbol(const RunConfig& cfg, const FiberPointOpts& o) {
    const PdeClass cls = model_class(o.model);
    const PfaffianChart pc = prolonged_model_chart(cls, o.chart);
    const Eigen::VectorXd x = fiber_point(pc, o);
    const double u = x(pc.chart.index_of("u1")), v = x(pc.chart.index_of("v1"));
    const SymbolAlgebra s = symbol_algebra(pc, x, canonical_levels(pc));
    const Stratum st = prolonged_chart_stratum(cls, o.chart, u, v, cfg.tol_rank);

    ordered_json j;
    j["schema"] = "eds.symbol/1";
    j["model"] = model_pde(cls).name();
    j["chart"] = o.chart;
    j["point"] = point_json(pc.chart, x);
    j["stratum"] = stratum_name(st);
    j["graded_dims"] = s.graded_dims;
    j["bracket_image_dims"] = bracket_image_dims(s, cfg.tol_rank);
    ordered_json gen = ordered_json::array();
    for (bool g : generating_condition(s, cfg.tol_rank)) gen.push_back(g);
    j["generating_condition"] = gen;
    j["top_pairing_rank"] = top_pairing_rank(s, cfg.tol_rank);
    j["jacobi_residual"] = jacobi_residual(s);

    const int m = stratum_index(st);
    const auto layers = reference_layers(cls);
    if (std::find(layers.begin(), layers.end(), m) != layers.end()) {
        const RefSymbol ref = reference_symbol(cls, m);
        if (ref.chart_id == o.chart) {
            const SymbolComparison cmp = compare_symbol(s, ref, cfg.tol_rank);
            j["reference_match"] = cmp.reference_match;
            j["unit_scale"] = cmp.unit_scale;
        }
    }
    emit(cfg, j);
    return 0;
}

int run_derived(const RunConfig& cfg, const FiberPointOpts& o) {
    const PdeClass cls = model_class(o.model);
    const PfaffianChart pc = prolonged_model_chart(cls, o.chart);
    const Eigen::VectorXd x = fiber_point(pc, o);
    const double u = x(pc.chart.index_of("u1")), v = x(pc.chart.index_of("v1"));
    const DerivedFlag f = derived_flag(pc, x, !o.full_pairs, cfg.tol_rank);
    ordered_json j;
    j["schema"] = "eds.derived/1";
    j["model"] = model_pde(cls).name();
    j["chart"] = o.chart;
    j["point"] = point_json(pc.chart, x);
    j["small_growth"] = !o.full_pairs;
    j["dims"] = f.dims;
    j["full"] = f.full();
    j["unstable"] = f.unstable;
    j["stratum"] = stratum_name(prolonged_chart_stratum(cls, o.chart, u, v, cfg.tol_rank));
    emit(cfg, j);
    return 0;
}

// ---- solve / verify-solution ----

struct SolveOpts {
    std::string input_file;
    int dump_grid = 5;
};

struct SolveInput {
    std::string model, chart;
    SolutionMap sol;
    std::vector<std::pair<double, double>> designated;
};

Curve load_curve(const toml::Table& t, const std::string& fname, const std::string& var) {
    const std::string base = "functions." + fname;
    if (t.has(base)) return Curve::polynomial(parse_expr(t.get_string(base), Chart({var})), var);
    if (t.has(base + ".poly"))
        return Curve::polynomial(parse_expr(t.get_string(base + ".poly"), Chart({var})), var);
    if (t.has(base + ".knots"))
        return Curve::tabulated(t.get_number_array(base + ".knots"),
                                t.get_number_array(base + ".values"));
    throw std::out_of_range("function '" + fname + "' needs a poly string or knots/values");
}

Expr load_biexpr(const toml::Table& t, const std::string& fname) {
    const std::string base = "functions." + fname;
    const std::string text = t.has(base) ? t.get_string(base) : t.get_string(base + ".poly");
    return parse_expr(text, Chart({"r", "s"}));
}

SolveInput load_solution(const std::string& path) {
    const toml::Table t = toml::parse_file(path);
    SolveInput in;
    in.model = t.get_string("model");
    in.chart = t.get_string("chart");
    const PdeClass cls = model_class(in.model);
    if (cls == PdeClass::Hyperbolic && in.chart == "xt")
        in.sol = wave_solution_xt(load_curve(t, "y", "t"), load_curve(t, "z0", "x"));
    else if (cls == PdeClass::Hyperbolic && in.chart == "rt")
        in.sol = wave_solution_rt(load_curve(t, "x", "r"), load_curve(t, "y", "t"));
    else if (cls == PdeClass::Parabolic && in.chart == "st")
        in.sol = parabolic_solution_st(load_curve(t, "y", "s"), load_curve(t, "x0", "s"));
    else if (cls == PdeClass::Elliptic && in.chart == "rs")
        in.sol = laplace_solution_rs(load_biexpr(t, "y"), load_biexpr(t, "x"));
    else
        throw std::invalid_argument("no solution family for model '" + in.model + "' chart '" +
                                    in.chart + "'");
    if (t.has("points_u")) {
        const auto us = t.get_number_array("points_u");
        const auto vs = t.get_number_array("points_v");
        if (us.size() != vs.size())
            throw std::invalid_argument("points_u and points_v must have equal length");
        for (size_t i = 0; i < us.size(); ++i) in.designated.emplace_back(us[i], vs[i]);
    }
    return in;
}

ordered_json report_json(const VerificationReport& rep) {
    ordered_json r;
    r["pass"] = rep.pass;
    r["max_residual"] = rep.max_residual;
    r["tol"] = rep.tol;
    r["grid"] = rep.grid;
    ordered_json per = ordered_json::object();
    for (const auto& [lab, val] : rep.per_generator) per[lab] = val;
    r["per_generator"] = per;
    return r;
}

ordered_json singular_json(const SolutionMap& sol, const std::vector<SingularPoint>& pts) {
    ordered_json arr = ordered_json::array();
    for (const auto& sp : pts) {
        ordered_json p;
        p[sol.params[0]] = sp.u;
        p[sol.params[1]] = sp.v;
        p["corank"] = sp.corank;
        arr.push_back(p);
    }
    return arr;
}

int run_solve(const RunConfig& cfg, const SolveOpts& o, bool dump_components) {
    const SolveInput in = load_solution(o.input_file);
    const VerificationReport rep = verify_solution(in.sol, cfg.tol_residual);
    const auto sing = scan_singular(in.sol);

    ordered_json j;
    j["schema"] = dump_components ? "eds.solve/1" : "eds.verify/1";
    j["model"] = in.model;
    j["chart"] = in.chart;
    j["params"] = {in.sol.params[0], in.sol.params[1]};
    j["window"] = {{"lo", {in.sol.lo[0], in.sol.lo[1]}}, {"hi", {in.sol.hi[0], in.sol.hi[1]}}};
    j["report"] = report_json(rep);
    j["singular_points"] = singular_json(in.sol, sing);

    ordered_json des = ordered_json::array();
    for (const auto& [u, v] : in.designated) {
        ordered_json p;
        p[in.sol.params[0]] = u;
        p[in.sol.params[1]] = v;
        p["corank"] = corank_at(in.sol, u, v, cfg.tol_rank);
        des.push_back(p);
    }
    j["designated"] = des;

    if (dump_components) {
        const PfaffianChart pc = embedded_model_chart(in.sol.cls, in.sol.chart_id);
        const int g = o.dump_grid;
        ordered_json comp;
        comp["names"] = pc.chart.coords();
        ordered_json us = ordered_json::array(), vs = ordered_json::array();
        for (int i = 0; i < g; ++i) {
            us.push_back(in.sol.lo[0] + (in.sol.hi[0] - in.sol.lo[0]) * i / (g - 1));
            vs.push_back(in.sol.lo[1] + (in.sol.hi[1] - in.sol.lo[1]) * i / (g - 1));
        }
        comp["u"] = us;
        comp["v"] = vs;
        ordered_json vals = ordered_json::object();
        for (int k = 0; k < pc.dim(); ++k) {
            ordered_json rows = ordered_json::array();
            for (int i = 0; i < g; ++i) {
                ordered_json row = ordered_json::array();
                for (int jj = 0; jj < g; ++jj)
                    row.push_back(in.sol.comp[k].f(us[i].get<double>(), vs[jj].get<double>()));
                rows.push_back(row);
            }
            vals[pc.chart.coord(k)] = rows;
        }
        comp["values"] = vals;
        j["components"] = comp;
    }
    emit(cfg, j);
    if (!dump_components && !rep.pass) return 2;
    return 0;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"rank-2 prolongations and singular solutions of second-order equations"};
    app.require_subcommand(1);
    RunConfig cfg;

    ClassifyOpts cl;
    auto* c_classify = app.add_subcommand("classify", "type of an equation at a point");
    c_classify->add_option("--pde", cl.pde_file, "equation file (TOML, keys F and name)")
        ->required();
    c_classify->add_option("--point", cl.point_file, "point file (JSON by coordinate name)");
    c_classify->add_flag("--exact", cl.exact, "evaluate over exact rationals");
    add_common(c_classify, cfg);

    PointCmdOpts r4;
    auto* c_rank4 = app.add_subcommand("rank4-type", "restricted curvature pencil at a point");
    c_rank4->add_option("--pde", r4.pde_file, "equation file")->required();
    c_rank4->add_option("--point", r4.point_file, "point file");
    add_common(c_rank4, cfg);

    FiberOpts fo;
    auto* c_fiber = app.add_subcommand("fiber", "integral-plane fiber topology at a point");
    c_fiber->add_option("--pde", fo.pde_file, "equation file")->required();
    c_fiber->add_option("--point", fo.point_file, "point file");
    c_fiber->add_flag("--oracle", fo.oracle, "run the mesh census oracle");
    add_common(c_fiber, cfg);

    ModelOpts ch;
    auto* c_charts = app.add_subcommand("charts", "fiber chart atlas of a model equation");
    c_charts->add_option("--model", ch.model, "wave | parabolic-model | laplace")->required();
    add_common(c_charts, cfg);

    ProlongOpts pr;
    auto* c_prolong = app.add_subcommand("prolong", "prolonged systems of a model equation");
    c_prolong->add_option("--model", pr.model, "wave | parabolic-model | laplace")->required();
    c_prolong->add_option("--chart", pr.chart, "fiber chart id (default I)");
    c_prolong->add_option("--level", pr.level, "tower height (default 1)");
    add_common(c_prolong, cfg);

    FiberPointOpts sy;
    auto* c_symbol = app.add_subcommand("symbol", "graded symbol algebra on a prolonged chart");
    c_symbol->add_option("--model", sy.model, "wave | parabolic-model | laplace")->required();
    c_symbol->add_option("--chart", sy.chart, "fiber chart id (default I)");
    c_symbol->add_option("-u", sy.u, "first fiber coordinate");
    c_symbol->add_option("-v", sy.v, "second fiber coordinate");
    c_symbol->add_option("--point", sy.point_file, "full chart point (JSON)");
    add_common(c_symbol, cfg);

    FiberPointOpts de;
    auto* c_derived = app.add_subcommand("derived", "derived flag on a prolonged chart");
    c_derived->add_option("--model", de.model, "wave | parabolic-model | laplace")->required();
    c_derived->add_option("--chart", de.chart, "fiber chart id (default I)");
    c_derived->add_option("-u", de.u, "first fiber coordinate");
    c_derived->add_option("-v", de.v, "second fiber coordinate");
    c_derived->add_option("--point", de.point_file, "full chart point (JSON)");
    c_derived->add_flag("--full-pairs", de.full_pairs,
                        "iterate the full derived system instead of the growth flag");
    add_common(c_derived, cfg);

    SolveOpts so;
    auto* c_solve = app.add_subcommand("solve", "construct and check an explicit surface");
    c_solve->add_option("--input", so.input_file, "construction file (TOML)")->required();
    c_solve->add_option("--grid", so.dump_grid, "component dump grid (default 5)")
        ->check(CLI::Range(2, 200));
    add_common(c_solve, cfg);

    SolveOpts vo;
    auto* c_verify = app.add_subcommand("verify-solution", "check a constructed surface");
    c_verify->add_option("--input", vo.input_file, "construction file (TOML)")->required();
    add_common(c_verify, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (c_classify->parsed()) return run_classify(cfg, cl);
    if (c_rank4->parsed()) return run_rank4(cfg, r4);
    if (c_fiber->parsed()) return run_fiber(cfg, fo);
    if (c_charts->parsed()) return run_charts(cfg, ch);
    if (c_prolong->parsed()) return run_prolong(cfg, pr);
    if (c_symbol->parsed()) return run_symbol(cfg, sy);
    if (c_derived->parsed()) return run_derived(cfg, de);
    if (c_solve->parsed()) return run_solve(cfg, so, true);
    if (c_verify->parsed()) return run_solve(cfg, vo, false);
    return 1;
}

} // namespace
} // namespace eds

int main(int argc, char** argv) {
    try {
        return eds::dispatch(argc, argv);
    } catch (const eds::OffSurface& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return 2;
    } catch (const eds::NonRegularPoint& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return 2;
    } catch (const eds::ConstructionError& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return 2;
    } catch (const eds::FrameError& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return 2;
    } catch (const eds::DegenerateBasis& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
