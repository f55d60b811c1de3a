#include "eds/solutions.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <random>

namespace eds {

namespace {

double simpson_panel(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_adapt(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_panel(a, fa, m, fm, flm);
    const double right = simpson_panel(m, fm, b, fb, frm);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           simpson_adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double tol = 1e-12) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    return simpson_adapt(f, a, fa, b, fb, m, fm, simpson_panel(a, fa, b, fb, fm), tol, 40);
}

} // namespace

Curve Curve::polynomial(const Expr& e, const std::string& var) {
    Curve c;
    c.var_ = var;
    c.poly_ = e;
    c.pd1_ = e.diff(var);
    c.pd2_ = c.pd1_->diff(var);
    c.pd3_ = c.pd2_->diff(var);
    c.pint_ = integrate_poly(e, var);
    return c;
}

Curve Curve::tabulated(std::vector<double> xs, std::vector<double> ys) {
    const int n = static_cast<int>(xs.size());
    if (n < 3 || ys.size() != xs.size())
        throw std::invalid_argument("tabulated curve needs at least 3 samples");
    for (int i = 0; i + 1 < n; ++i)
        if (!(xs[i] < xs[i + 1])) throw std::invalid_argument("sample abscissae must increase");

    Curve c;
    c.var_ = "t";
    c.xs_ = std::move(xs);
    c.ys_ = std::move(ys);
    c.lo_ = c.xs_.front();
    c.hi_ = c.xs_.back();

    // natural spline second derivatives, Thomas solve
    c.m2_.assign(n, 0.0);
    if (n > 2) {
        std::vector<double> diag(n - 2), rhs(n - 2), upper(n - 2, 0.0);
        for (int i = 1; i + 1 < n; ++i) {
            const double hl = c.xs_[i] - c.xs_[i - 1];
            const double hr = c.xs_[i + 1] - c.xs_[i];
            diag[i - 1] = 2.0 * (hl + hr);
            upper[i - 1] = hr;
            rhs[i - 1] = 6.0 * ((c.ys_[i + 1] - c.ys_[i]) / hr - (c.ys_[i] - c.ys_[i - 1]) / hl);
        }
        for (int i = 1; i + 2 < n; ++i) {
            const double w = (c.xs_[i + 1] - c.xs_[i]) / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for (int i = n - 3; i >= 0; --i) {
            double v = rhs[i];
            if (i + 1 < n - 2) v -= upper[i] * c.m2_[i + 2];
            c.m2_[i + 1] = v / diag[i];
        }
    }

    c.cum_.assign(n - 1, 0.0);
    for (int i = 0; i + 2 < n; ++i) c.cum_[i + 1] = c.cum_[i] + c.seg_anti(i, c.xs_[i + 1]);
    c.int_off_ = c.cum_[c.segment(c.base())] + c.seg_anti(c.segment(c.base()), c.base());
    return c;
}

int Curve::segment(double t) const {
    const int n = static_cast<int>(xs_.size());
    int i = static_cast<int>(std::upper_bound(xs_.begin(), xs_.end(), t) - xs_.begin()) - 1;
    return std::clamp(i, 0, n - 2);
}

double Curve::value(double t) const {
    if (poly_) return poly_->eval({{var_, t}});
    const int i = segment(t);
    const double h = xs_[i + 1] - xs_[i], dl = xs_[i + 1] - t, dr = t - xs_[i];
    return m2_[i] * dl * dl * dl / (6 * h) + m2_[i + 1] * dr * dr * dr / (6 * h) +
           (ys_[i] / h - m2_[i] * h / 6) * dl + (ys_[i + 1] / h - m2_[i + 1] * h / 6) * dr;
}

double Curve::d1(double t) const {
    if (pd1_) return pd1_->eval({{var_, t}});
    const int i = segment(t);
    const double h = xs_[i + 1] - xs_[i], dl = xs_[i + 1] - t, dr = t - xs_[i];
    return -m2_[i] * dl * dl / (2 * h) + m2_[i + 1] * dr * dr / (2 * h) -
           (ys_[i] / h - m2_[i] * h / 6) + (ys_[i + 1] / h - m2_[i + 1] * h / 6);
}

double Curve::d2(double t) const {
    if (pd2_) return pd2_->eval({{var_, t}});
    const int i = segment(t);
    const double h = xs_[i + 1] - xs_[i];
    return m2_[i] * (xs_[i + 1] - t) / h + m2_[i + 1] * (t - xs_[i]) / h;
}

double Curve::d3(double t) const {
    if (pd3_) return pd3_->eval({{var_, t}});
    const int i = segment(t);
    return (m2_[i + 1] - m2_[i]) / (xs_[i + 1] - xs_[i]);
}

double Curve::seg_anti(int i, double t) const {
    const double h = xs_[i + 1] - xs_[i];
    auto at = [&](double x) {
        const double dl = xs_[i + 1] - x, dr = x - xs_[i];
        return -m2_[i] * dl * dl * dl * dl / (24 * h) + m2_[i + 1] * dr * dr * dr * dr / (24 * h) -
               (ys_[i] / h - m2_[i] * h / 6) * dl * dl / 2 +
               (ys_[i + 1] / h - m2_[i + 1] * h / 6) * dr * dr / 2;
    };
    return at(t) - at(xs_[i]);
}

double Curve::base() const {
    if (poly_) return 0.0;
    return (lo_ <= 0.0 && hi_ >= 0.0) ? 0.0 : lo_;
}

double Curve::antiderivative(double t) const {
    if (pint_) return pint_->eval({{var_, t}});
    const int i = segment(t);
    return cum_[i] + seg_anti(i, t) - int_off_;
}

const Expr& Curve::poly() const {
    if (!poly_) throw std::logic_error("curve is tabulated, not polynomial");
    return *poly_;
}

double antiderivative_of_product(const Curve& a, const Curve& b, double t) {
    if (a.is_polynomial() && b.is_polynomial()) {
        if (a.var() != b.var())
            throw std::invalid_argument("product curves must share a variable");
        const Expr anti = integrate_poly(a.poly() * b.poly(), a.var());
        return anti.eval({{a.var(), t}}) - anti.eval({{a.var(), 0.0}});
    }
    const double b0 = (a.base() == b.base()) ? a.base() : 0.0;
    return integrate_1d([&](double x) { return a.value(x) * b.value(x); }, b0, t);
}

namespace {

Component param_u() {
    return {[](double u, double) { return u; }, [](double, double) { return 1.0; },
            [](double, double) { return 0.0; }};
}

Component param_v() {
    return {[](double, double v) { return v; }, [](double, double) { return 0.0; },
            [](double, double) { return 1.0; }};
}

Component curve_of_u(const Curve& c) {
    return {[c](double u, double) { return c.value(u); },
            [c](double u, double) { return c.d1(u); }, [](double, double) { return 0.0; }};
}

Component curve_of_v(const Curve& c) {
    return {[c](double, double v) { return c.value(v); }, [](double, double) { return 0.0; },
            [c](double, double v) { return c.d1(v); }};
}

Component expr_comp(const Expr& e, const std::string& uvar, const std::string& vvar) {
    const Expr du = e.diff(uvar), dv = e.diff(vvar);
    auto at = [uvar, vvar](const Expr& f, double u, double v) {
        return f.eval({{uvar, u}, {vvar, v}});
    };
    return {[e, at](double u, double v) { return at(e, u, v); },
            [du, at](double u, double v) { return at(du, u, v); },
            [dv, at](double u, double v) { return at(dv, u, v); }};
}

} // namespace

SolutionMap wave_solution_xt(const Curve& y, const Curve& z0) {
    SolutionMap s;
    s.cls = PdeClass::Hyperbolic;
    s.chart_id = "xt";
    s.params = {"x", "t"};
    s.lo = {z0.lo(), y.lo()};
    s.hi = {z0.hi(), y.hi()};
    s.comp.resize(9);
    s.comp[0] = param_u();     // x
    s.comp[1] = curve_of_v(y); // y(t)
    // z = t y^2/2 + (1/2) int y^2 - y int y + z0(x)
    s.comp[2] = {[y, z0](double u, double v) {
                     const double yv = y.value(v);
                     return v * yv * yv / 2 + antiderivative_of_product(y, y, v) / 2 -
                            yv * y.antiderivative(v) + z0.value(u);
                 },
                 [z0](double u, double) { return z0.d1(u); },
                 [y](double, double v) {
                     const double yv = y.value(v), yd = y.d1(v);
                     return yv * yv / 2 + v * yv * yd + yv * yv / 2 - yd * y.antiderivative(v) -
                            yv * yv;
                 }};
    s.comp[3] = {[z0](double u, double) { return z0.d1(u); },
                 [z0](double u, double) { return z0.d2(u); },
                 [](double, double) { return 0.0; }}; // p
    // q = t y - int y
    s.comp[4] = {[y](double, double v) { return v * y.value(v) - y.antiderivative(v); },
                 [](double, double) { return 0.0; },
                 [y](double, double v) { return y.value(v) + v * y.d1(v) - y.value(v); }};
    s.comp[5] = {[z0](double u, double) { return z0.d2(u); },
                 [z0](double u, double) { return z0.d3(u); },
                 [](double, double) { return 0.0; }}; // r
    s.comp[6] = param_v();                            // t
    s.comp[7] = {[y](double, double v) { return y.d1(v); }, [](double, double) { return 0.0; },
                 [y](double, double v) { return y.d2(v); }};   // b = y'
    s.comp[8] = {[z0](double u, double) { return z0.d3(u); }, {}, {}}; // c = z0'''
    return s;
}

SolutionMap wave_solution_rt(const Curve& x, const Curve& y) {
    SolutionMap s;
    s.cls = PdeClass::Hyperbolic;
    s.chart_id = "rt";
    s.params = {"r", "t"};
    s.lo = {x.lo(), y.lo()};
    s.hi = {x.hi(), y.hi()};
    s.comp.resize(9);
    s.comp[0] = curve_of_u(x);
    s.comp[1] = curve_of_v(y);
    // z = (r x^2 + t y^2 + int x^2 + int y^2)/2 - x int x - y int y
    s.comp[2] = {[x, y](double u, double v) {
                     const double xv = x.value(u), yv = y.value(v);
                     return (u * xv * xv + v * yv * yv + antiderivative_of_product(x, x, u) +
                             antiderivative_of_product(y, y, v)) /
                                2 -
                            xv * x.antiderivative(u) - yv * y.antiderivative(v);
                 },
                 [x](double u, double) {
                     const double xv = x.value(u), xd = x.d1(u);
                     return xv * xv / 2 + u * xv * xd + xv * xv / 2 - xd * x.antiderivative(u) -
                            xv * xv;
                 },
                 [y](double, double v) {
                     const double yv = y.value(v), yd = y.d1(v);
                     return yv * yv / 2 + v * yv * yd + yv * yv / 2 - yd * y.antiderivative(v) -
                            yv * yv;
                 }};
    // p = r x - int x, q = t y - int y
    s.comp[3] = {[x](double u, double) { return u * x.value(u) - x.antiderivative(u); },
                 [x](double u, double) { return x.value(u) + u * x.d1(u) - x.value(u); },
                 [](double, double) { return 0.0; }};
    s.comp[4] = {[y](double, double v) { return v * y.value(v) - y.antiderivative(v); },
                 [](double, double) { return 0.0; },
                 [y](double, double v) { return y.value(v) + v * y.d1(v) - y.value(v); }};
    s.comp[5] = param_u(); // r
    s.comp[6] = param_v(); // t
    s.comp[7] = {[x](double u, double) { return x.d1(u); }, [x](double u, double) { return x.d2(u); },
                 [](double, double) { return 0.0; }}; // a = x'
    s.comp[8] = {[y](double, double v) { return y.d1(v); }, [](double, double) { return 0.0; },
                 [y](double, double v) { return y.d2(v); }}; // d = y'
    return s;
}

SolutionMap parabolic_solution_st(const Curve& y, const Curve& x0) {
    SolutionMap s;
    s.cls = PdeClass::Parabolic;
    s.chart_id = "st";
    s.params = {"s", "t"};
    s.lo = {std::max(y.lo(), x0.lo()), -1};
    s.hi = {std::min(y.hi(), x0.hi()), 1};
    s.comp.resize(9);
    // x = t y'(s) + x0(s)
    s.comp[0] = {[y, x0](double u, double v) { return v * y.d1(u) + x0.value(u); },
                 [y, x0](double u, double v) { return v * y.d2(u) + x0.d1(u); },
                 [y](double u, double) { return y.d1(u); }};
    s.comp[1] = curve_of_u(y);
    // z = t (s y - Y) y' + s y x0 + int(y x0) - x0 Y - y int x0, Y = int y
    s.comp[2] = {[y, x0](double u, double v) {
                     const double yv = y.value(u), yd = y.d1(u), Y = y.antiderivative(u);
                     return v * (u * yv - Y) * yd + u * yv * x0.value(u) +
                            antiderivative_of_product(y, x0, u) - x0.value(u) * Y -
                            yv * x0.antiderivative(u);
                 },
                 [y, x0](double u, double v) {
                     const double yv = y.value(u), yd = y.d1(u), ydd = y.d2(u);
                     const double Y = y.antiderivative(u);
                     const double xv = x0.value(u), xd = x0.d1(u), X = x0.antiderivative(u);
                     return v * ((yv + u * yd - yv) * yd + (u * yv - Y) * ydd) +
                            (yv * xv + u * yd * xv + u * yv * xd) + yv * xv - xd * Y - xv * yv -
                            yd * X - yv * xv;
                 },
                 [y](double u, double) {
                     return (u * y.value(u) - y.antiderivative(u)) * y.d1(u);
                 }};
    // p = s y - Y
    s.comp[3] = {[y](double u, double) { return u * y.value(u) - y.antiderivative(u); },
                 [y](double u, double) { return y.value(u) + u * y.d1(u) - y.value(u); },
                 [](double, double) { return 0.0; }};
    // q = t s y' + s x0 - int x0
    s.comp[4] = {[y, x0](double u, double v) {
                     return v * u * y.d1(u) + u * x0.value(u) - x0.antiderivative(u);
                 },
                 [y, x0](double u, double v) {
                     return v * (y.d1(u) + u * y.d2(u)) + x0.value(u) + u * x0.d1(u) -
                            x0.value(u);
                 },
                 [y](double u, double) { return u * y.d1(u); }};
    s.comp[5] = param_u(); // s
    s.comp[6] = param_v(); // t
    // a = t y'' + x0'
    s.comp[7] = {[y, x0](double u, double v) { return v * y.d2(u) + x0.d1(u); },
                 [y, x0](double u, double v) { return v * y.d3(u) + x0.d2(u); },
                 [y](double u, double) { return y.d2(u); }};
    s.comp[8] = {[y](double u, double) { return y.d1(u); },
                 [y](double u, double) { return y.d2(u); },
                 [](double, double) { return 0.0; }}; // b = y'
    return s;
}

std::pair<Expr, Expr> holomorphic_pair(const std::vector<std::pair<Rational, Rational>>& coeffs) {
    const Expr r = Expr::var("r"), s = Expr::var("s");
    Expr wk_re = Expr::constant(1), wk_im = Expr::constant(0);
    Expr yre = Expr::constant(0), xim = Expr::constant(0);
    for (size_t k = 0; k < coeffs.size(); ++k) {
        const Expr a = Expr::constant(coeffs[k].first), b = Expr::constant(coeffs[k].second);
        yre = yre + a * wk_re - b * wk_im;
        xim = xim + a * wk_im + b * wk_re;
        const Expr nre = wk_re * r - wk_im * s;
        const Expr nim = wk_re * s + wk_im * r;
        wk_re = nre;
        wk_im = nim;
    }
    return {yre, xim};
}

namespace {

// exact polynomial potential of a closed 1-form fr dr + fs ds, zero at the
// origin, cross-checked by two-leg numeric path integrals
Expr potential(const Expr& fr, const Expr& fs, const Chart& rs, std::mt19937_64& rng) {
    const Expr p0 = integrate_poly(fr, "r");
    const Expr rem = fs - p0.diff("s");
    if (!is_zero_probabilistic(rem.diff("r"), rs))
        throw ConstructionError("gradient data is not closed");
    const Expr pot = p0 + integrate_poly(rem, "s");

    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int k = 0; k < 5; ++k) {
        const double rt = U(rng), st = U(rng);
        auto leg_r = [&](double sfix) {
            return integrate_1d([&](double x) { return fr.eval({{"r", x}, {"s", sfix}}); }, 0, rt);
        };
        auto leg_s = [&](double rfix) {
            return integrate_1d([&](double x) { return fs.eval({{"r", rfix}, {"s", x}}); }, 0, st);
        };
        const double want = pot.eval({{"r", rt}, {"s", st}});
        if (std::abs(leg_r(0) + leg_s(rt) - want) > 1e-9 ||
            std::abs(leg_s(0) + leg_r(st) - want) > 1e-9)
            throw ConstructionError("potential is path dependent");
    }
    return pot;
}

} // namespace

SolutionMap laplace_solution_rs(const Expr& y, const Expr& x, double cr_tol) {
    const Chart rs({"r", "s"});
    const Expr yr = y.diff("r"), ys = y.diff("s");
    const Expr xr = x.diff("r"), xs = x.diff("s");

    const Expr cr1 = yr - xs, cr2 = ys + xr;
    double worst = 0;
    for (int i = 0; i <= 20; ++i)
        for (int j = 0; j <= 20; ++j) {
            const Env e{{"r", -1.0 + 0.1 * i}, {"s", -1.0 + 0.1 * j}};
            worst = std::max({worst, std::abs(cr1.eval(e)), std::abs(cr2.eval(e))});
        }
    if (worst > cr_tol || !is_zero_probabilistic(cr1, rs) || !is_zero_probabilistic(cr2, rs))
        throw ConstructionError("input pair is not conjugate (worst residual " +
                                std::to_string(worst) + ")");

    const Expr R = Expr::var("r"), S = Expr::var("s");
    std::mt19937_64 rng(4242);
    const Expr p = potential(R * xr + S * yr, R * xs + S * ys, rs, rng);
    const Expr q = potential(S * xr - R * yr, S * xs - R * ys, rs, rng);
    const Expr z = potential(p * xr + q * yr, p * xs + q * ys, rs, rng);

    SolutionMap s;
    s.cls = PdeClass::Elliptic;
    s.chart_id = "rs";
    s.params = {"r", "s"};
    s.comp.resize(9);
    s.comp[0] = expr_comp(x, "r", "s");
    s.comp[1] = expr_comp(y, "r", "s");
    s.comp[2] = expr_comp(z, "r", "s");
    s.comp[3] = expr_comp(p, "r", "s");
    s.comp[4] = expr_comp(q, "r", "s");
    s.comp[5] = param_u();
    s.comp[6] = param_v();
    s.comp[7] = expr_comp(yr, "r", "s"); // b = y_r
    s.comp[8] = expr_comp(ys, "r", "s"); // d = y_s
    return s;
}

VerificationReport verify_solution(const SolutionMap& sol, double tol, int grid) {
    const PfaffianChart pc = embedded_model_chart(sol.cls, sol.chart_id);
    const int n = pc.dim();
    if (static_cast<int>(sol.comp.size()) != n)
        throw std::invalid_argument("component count does not match the chart");

    VerificationReport rep;
    rep.tol = tol;
    rep.grid = grid;
    rep.per_generator.reserve(pc.generators.size());
    for (const auto& lab : pc.gen_labels) rep.per_generator.emplace_back(lab, 0.0);

    for (int i = 0; i < grid; ++i) {
        const double u = sol.lo[0] + (sol.hi[0] - sol.lo[0]) * i / (grid - 1);
        for (int j = 0; j < grid; ++j) {
            const double v = sol.lo[1] + (sol.hi[1] - sol.lo[1]) * j / (grid - 1);
            Env env;
            for (int k = 0; k < n; ++k) env[pc.chart.coord(k)] = sol.comp[k].f(u, v);
            for (size_t g = 0; g < pc.generators.size(); ++g) {
                const Eigen::RowVectorXd a = pc.generators[g].eval(env).as_covector();
                double ru = 0, rv = 0;
                for (int k = 0; k < n; ++k) {
                    if (std::abs(a(k)) < 1e-15) continue;
                    if (!sol.comp[k].fu || !sol.comp[k].fv)
                        throw std::logic_error("missing partial for coordinate " +
                                               pc.chart.coord(k));
                    ru += a(k) * sol.comp[k].fu(u, v);
                    rv += a(k) * sol.comp[k].fv(u, v);
                }
                const double res = std::max(std::abs(ru), std::abs(rv));
                rep.per_generator[g].second = std::max(rep.per_generator[g].second, res);
                rep.max_residual = std::max(rep.max_residual, res);
            }
        }
    }
    rep.pass = rep.max_residual < tol;
    return rep;
}

int corank_at(const SolutionMap& sol, double u, double v, double tol) {
    Eigen::Matrix2d J;
    J << sol.comp[0].fu(u, v), sol.comp[0].fv(u, v), sol.comp[1].fu(u, v), sol.comp[1].fv(u, v);
    return 2 - rank_svd(J, tol);
}

std::vector<SingularPoint> scan_singular(const SolutionMap& sol, int grid, double tol) {
    std::vector<SingularPoint> out;
    for (int i = 0; i < grid; ++i) {
        const double u = sol.lo[0] + (sol.hi[0] - sol.lo[0]) * i / (grid - 1);
        for (int j = 0; j < grid; ++j) {
            const double v = sol.lo[1] + (sol.hi[1] - sol.lo[1]) * j / (grid - 1);
            const int c = corank_at(sol, u, v, tol);
            if (c > 0) out.push_back({u, v, c});
        }
    }
    return out;
}

} // namespace eds
