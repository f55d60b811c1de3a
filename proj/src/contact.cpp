#include "eds/contact.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace eds {

namespace {

bool tree_exact_evaluable(const Expr& e) {
    if (e.kind() == Expr::Kind::Call) return false;
    for (const auto& k : e.kids())
        if (!tree_exact_evaluable(k)) return false;
    return true;
}

Expr ev(const char* name) { return Expr::var(name); }

std::string fmt_cond(double c) {
    std::ostringstream os;
    os << c;
    return os.str();
}

} // namespace

std::string pde_class_name(PdeClass c) {
    switch (c) {
        case PdeClass::Hyperbolic: return "hyperbolic";
        case PdeClass::Parabolic: return "parabolic";
        case PdeClass::Elliptic: return "elliptic";
        case PdeClass::Degenerate: return "degenerate";
        case PdeClass::NonRegular: return "nonregular";
    }
    return "unknown";
}

Pde::Pde(std::string name, Expr F) : name_(std::move(name)), F_(std::move(F)) {
    Chart j2 = j2_chart();
    for (const auto& v : F_.free_vars())
        if (!j2.has(v))
            throw std::invalid_argument("equation uses unknown coordinate '" + v + "'");
}

const Expr& Pde::dF(const std::string& coord) const {
    auto it = grad_.find(coord);
    if (it == grad_.end()) it = grad_.emplace(coord, F_.diff(coord)).first;
    return it->second;
}

Form Pde::differential() const {
    Chart j2 = j2_chart();
    Form d = Form::zero(j2, 1);
    for (int i = 0; i < j2.dim(); ++i) {
        Expr g = dF(j2.coord(i));
        if (!g.is_zero_const()) d = d + Form::d_coord(j2, j2.coord(i)) * g;
    }
    return d;
}

bool Pde::exact_evaluable() const { return tree_exact_evaluable(F_); }

Chart j2_chart() { return Chart({"x", "y", "z", "p", "q", "r", "s", "t"}); }

std::vector<Form> contact_system_j2() {
    Chart c = j2_chart();
    auto dc = [&c](const char* n) { return Form::d_coord(c, n); };
    Form w0 = dc("z") - dc("x") * ev("p") - dc("y") * ev("q");
    Form w1 = dc("p") - dc("x") * ev("r") - dc("y") * ev("s");
    Form w2 = dc("q") - dc("x") * ev("s") - dc("y") * ev("t");
    return {w0, w1, w2};
}

Pde model_pde(PdeClass c) {
    switch (c) {
        case PdeClass::Hyperbolic: return Pde("wave", ev("s"));
        case PdeClass::Parabolic: return Pde("parabolic-model", ev("r"));
        case PdeClass::Elliptic: return Pde("laplace", ev("r") + ev("t"));
        default: throw std::invalid_argument("no model equation for this class");
    }
}

ClassifyResult classify_point(const Pde& pde, const Env& w, double tol, double tol_surface) {
    const double fw = pde.F().eval(w);
    if (std::abs(fw) > tol_surface)
        throw OffSurface("point is not on the zero set: |F| = " + fmt_cond(std::abs(fw)));
    ClassifyResult res;
    const double fr = pde.dF("r").eval(w);
    const double fs = pde.dF("s").eval(w);
    const double ft = pde.dF("t").eval(w);
    res.grad_norm = std::sqrt(fr * fr + fs * fs + ft * ft);
    res.delta = fr * ft - fs * fs / 4.0;
    if (res.grad_norm <= tol) {
        res.cls = PdeClass::NonRegular;
        return res;
    }
    const double a = std::abs(res.delta);
    res.near_threshold = (a >= tol / 10.0 && a <= tol * 10.0);
    if (a <= tol) res.cls = PdeClass::Parabolic;
    else res.cls = res.delta < 0 ? PdeClass::Hyperbolic : PdeClass::Elliptic;
    return res;
}

ClassifyResult classify_point_exact(const Pde& pde, const ExactEnv& w) {
    if (!pde.exact_evaluable())
        throw EvalError("equation is not exactly evaluable");
    const Rational fw = pde.F().eval_exact(w);
    if (!fw.is_zero()) throw OffSurface("point is not on the zero set: F = " + fw.str());
    ClassifyResult res;
    res.exact = true;
    const Rational fr = pde.dF("r").eval_exact(w);
    const Rational fs = pde.dF("s").eval_exact(w);
    const Rational ft = pde.dF("t").eval_exact(w);
    res.grad_norm = std::sqrt(fr.to_double() * fr.to_double() + fs.to_double() * fs.to_double() +
                              ft.to_double() * ft.to_double());
    res.delta_exact = fr * ft - fs * fs / Rational(4);
    res.delta = res.delta_exact.to_double();
    if (fr.is_zero() && fs.is_zero() && ft.is_zero()) {
        res.cls = PdeClass::NonRegular;
        return res;
    }
    const int sg = res.delta_exact.sign();
    res.cls = sg == 0 ? PdeClass::Parabolic
                      : (sg < 0 ? PdeClass::Hyperbolic : PdeClass::Elliptic);
    return res;
}

int PfaffianChart::find_comp(const std::string& label) const {
    for (size_t i = 0; i < comp_labels.size(); ++i)
        if (comp_labels[i] == label) return static_cast<int>(i);
    return -1;
}

PfaffianChart model_surface_chart(PdeClass c) {
    PfaffianChart pc;
    switch (c) {
        case PdeClass::Hyperbolic: {
            pc.id = "model-hyperbolic";
            pc.chart = Chart({"x", "y", "z", "p", "q", "r", "t"});
            auto dc = [&pc](const char* n) { return Form::d_coord(pc.chart, n); };
            pc.generators = {dc("z") - dc("x") * ev("p") - dc("y") * ev("q"),
                             dc("p") - dc("x") * ev("r"), dc("q") - dc("y") * ev("t")};
            pc.complement = {dc("x"), dc("y"), dc("r"), dc("t")};
            pc.comp_labels = {"w1", "w2", "p11", "p22"};
            break;
        }
        case PdeClass::Parabolic: {
            pc.id = "model-parabolic";
            pc.chart = Chart({"x", "y", "z", "p", "q", "s", "t"});
            auto dc = [&pc](const char* n) { return Form::d_coord(pc.chart, n); };
            pc.generators = {dc("z") - dc("x") * ev("p") - dc("y") * ev("q"),
                             dc("p") - dc("y") * ev("s"),
                             dc("q") - dc("x") * ev("s") - dc("y") * ev("t")};
            pc.complement = {dc("x"), dc("y"), dc("s"), dc("t")};
            pc.comp_labels = {"w1", "w2", "p12", "p22"};
            break;
        }
        case PdeClass::Elliptic: {
            pc.id = "model-elliptic";
            pc.chart = Chart({"x", "y", "z", "p", "q", "r", "s"});
            auto dc = [&pc](const char* n) { return Form::d_coord(pc.chart, n); };
            pc.generators = {dc("z") - dc("x") * ev("p") - dc("y") * ev("q"),
                             dc("p") - dc("x") * ev("r") - dc("y") * ev("s"),
                             dc("q") - dc("x") * ev("s") + dc("y") * ev("r")};
            pc.complement = {dc("x"), dc("y"), dc("r"), dc("s")};
            pc.comp_labels = {"w1", "w2", "p11", "p12"};
            break;
        }
        default: throw std::invalid_argument("no flat model for this class");
    }
    pc.gen_labels = {"c0", "c1", "c2"};
    return pc;
}

DistributionSample sample_chart(std::shared_ptr<const PfaffianChart> pc,
                                const Eigen::VectorXd& point, double tol) {
    const int n = pc->dim();
    const int k = pc->corank();
    if (n - k != 4) throw std::invalid_argument("chart does not cut a rank-4 plane field");
    DistributionSample s;
    s.source = pc;
    s.point = point;
    Env env = env_of(pc->chart, point);
    s.gen_covectors.resize(k, n);
    for (int i = 0; i < k; ++i) s.gen_covectors.row(i) = pc->generators[i].eval(env).as_covector();
    bool unstable = false;
    if (rank_svd(s.gen_covectors, tol, &unstable) != k)
        throw FrameError("Pfaffian generators are dependent at this point");
    s.rank_unstable = unstable;
    s.basis = kernel_basis(s.gen_covectors, tol);
    std::vector<Eigen::VectorXd> cols;
    for (int i = 0; i < 4; ++i) cols.push_back(s.basis.col(i));
    for (int i = 0; i < k; ++i)
        s.curvature.push_back(restrict2(pc->generators[i].d().eval(env), cols, tol));
    return s;
}

DistributionSample induced_distribution(const Pde& pde, const Env& w, double tol) {
    ClassifyResult cr = classify_point(pde, w, tol);
    if (cr.cls == PdeClass::NonRegular)
        throw NonRegularPoint("equation gradient in (r,s,t) vanishes at this point");
    auto pc = std::make_shared<PfaffianChart>();
    pc->id = "induced:" + pde.name();
    pc->chart = j2_chart();
    pc->generators = contact_system_j2();
    pc->generators.push_back(pde.differential());
    pc->gen_labels = {"c0", "c1", "c2", "dF"};
    Eigen::VectorXd point(pc->chart.dim());
    for (int i = 0; i < pc->chart.dim(); ++i) {
        auto it = w.find(pc->chart.coord(i));
        if (it == w.end())
            throw std::invalid_argument("point is missing coordinate '" + pc->chart.coord(i) + "'");
        point(i) = it->second;
    }
    return sample_chart(pc, point, tol);
}

Rank4Type rank4_type(const DistributionSample& s, double tol) {
    Rank4Type rt;
    const int k = static_cast<int>(s.curvature.size());
    std::vector<std::pair<double, int>> norms;
    for (int i = 0; i < k; ++i) norms.push_back({s.curvature[i].norm(), i});
    std::sort(norms.begin(), norms.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    rt.active[0] = norms[0].second;
    rt.active[1] = norms[1].second;
    const double m = norms[0].first;
    if (m <= tol) {
        rt.cls = PdeClass::Degenerate;
        return rt;
    }
    Eigen::Matrix4d M1 = s.curvature[rt.active[0]] / m;
    Eigen::Matrix4d M2 = s.curvature[rt.active[1]] / m;
    rt.coeffs = pfaffian_pencil(M1, M2);
    rt.disc = rt.coeffs.disc();
    const double cmax =
        std::max({std::abs(rt.coeffs.alpha), std::abs(rt.coeffs.beta), std::abs(rt.coeffs.gamma)});
    if (cmax <= tol) {
        rt.cls = PdeClass::Degenerate;
        return rt;
    }
    const double a = std::abs(rt.disc);
    rt.near_threshold = (a >= tol / 10.0 && a <= tol * 10.0);
    if (a <= tol) rt.cls = PdeClass::Parabolic;
    else rt.cls = rt.disc > 0 ? PdeClass::Hyperbolic : PdeClass::Elliptic;
    return rt;
}

Eigen::Matrix4d pattern_n1(PdeClass c) {
    Eigen::Matrix4d P = Eigen::Matrix4d::Zero();
    auto set = [&P](int i, int j, double v) {
        P(i, j) = v;
        P(j, i) = -v;
    };
    switch (c) {
        case PdeClass::Hyperbolic: set(0, 2, 1); break;
        case PdeClass::Parabolic: set(1, 2, 1); break;
        case PdeClass::Elliptic:
            set(0, 2, 1);
            set(1, 3, 1);
            break;
        default: throw std::invalid_argument("no flat pattern for this class");
    }
    return P;
}

Eigen::Matrix4d pattern_n2(PdeClass c) {
    Eigen::Matrix4d P = Eigen::Matrix4d::Zero();
    auto set = [&P](int i, int j, double v) {
        P(i, j) = v;
        P(j, i) = -v;
    };
    switch (c) {
        case PdeClass::Hyperbolic: set(1, 3, 1); break;
        case PdeClass::Parabolic:
            set(0, 2, 1);
            set(1, 3, 1);
            break;
        case PdeClass::Elliptic:
            set(0, 3, 1);
            set(1, 2, -1);
            break;
        default: throw std::invalid_argument("no flat pattern for this class");
    }
    return P;
}

namespace {

// roots of alpha*l^2 + beta*l + gamma treated projectively as (l : m)
struct PencilRoots {
    // real case: N = l*M1 + m*M2 per root
    double l1, m1, l2, m2;
    // complex case: root (lc : 1)
    std::complex<double> lc;
    bool complex_pair = false;
};

PencilRoots pencil_roots(const PencilCoeffs& pc, double disc) {
    PencilRoots r{0, 0, 0, 0, {0, 0}, false};
    const double a = pc.alpha, b = pc.beta, g = pc.gamma;
    if (disc < 0) {
        r.complex_pair = true;
        // alpha != 0 in the elliptic case since alpha*gamma > beta^2/4 >= 0
        r.lc = std::complex<double>(-b / (2 * a), std::sqrt(-disc) / (2 * a));
        return r;
    }
    const double sd = std::sqrt(std::max(0.0, disc));
    if (std::abs(a) >= std::abs(g)) {
        if (std::abs(a) == 0.0) {  // both tiny: roots (1:0) and (0:1), beta dominates
            r.l1 = 1;
            r.m1 = 0;
            r.l2 = 0;
            r.m2 = 1;
            return r;
        }
        const double qq = -(b + (b >= 0 ? sd : -sd)) / 2.0;
        // stable pairing: one root from qq/a, the other from g/qq when qq != 0
        r.l1 = (std::abs(qq) > 0) ? qq / a : (-b / a);
        r.m1 = 1;
        if (std::abs(qq) > 0) {
            r.l2 = g / qq;
            r.m2 = 1;
        } else {
            r.l2 = 0;
            r.m2 = 1;
        }
        if (disc == 0.0) {  // collapse to the double root direction
            r.l2 = r.l1;
            r.m2 = 1;
        }
    } else {
        // work with m as the affine unknown: g*m^2 + b*m + a
        const double qq = -(b + (b >= 0 ? sd : -sd)) / 2.0;
        r.m1 = (std::abs(qq) > 0) ? qq / g : (-b / g);
        r.l1 = 1;
        if (std::abs(qq) > 0) {
            r.m2 = a / qq;
            r.l2 = 1;
        } else {
            r.m2 = 0;
            r.l2 = 1;
        }
        if (disc == 0.0) {
            r.m2 = r.m1;
            r.l2 = 1;
        }
    }
    return r;
}

void normalize_dir(double& l, double& m) {
    const double n = std::hypot(l, m);
    if (n > 0) {
        l /= n;
        m /= n;
    }
}

Eigen::Vector2d solve2x2(const Eigen::Matrix2d& A, const Eigen::Vector2d& b, double tol,
                         const char* what) {
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(1) <= tol * std::max(1.0, sv(0)))
        throw FrameError(std::string(what) + ": system is singular, condition " +
                         fmt_cond(sv(0) / std::max(sv(1), 1e-300)));
    return svd.solve(b);
}

} // namespace

AdaptedFrame adapted_coframe(const DistributionSample& s, double tol) {
    Rank4Type rt = rank4_type(s, tol);
    if (rt.cls == PdeClass::Degenerate)
        throw FrameError("curvature pencil is degenerate, no adapted frame exists");
    AdaptedFrame af;
    af.cls = rt.cls;

    const double mnorm =
        std::max(s.curvature[rt.active[0]].norm(), s.curvature[rt.active[1]].norm());
    Eigen::Matrix4d M1 = s.curvature[rt.active[0]] / mnorm;
    Eigen::Matrix4d M2 = s.curvature[rt.active[1]] / mnorm;
    // thetas are combinations of the active generators; track the coefficients
    double t1c1 = 0, t1c2 = 0, t2c1 = 0, t2c2 = 0;
    // B columns give the adapted frame in the sample basis
    Eigen::Matrix4d B;

    if (rt.cls == PdeClass::Hyperbolic) {
        PencilRoots roots = pencil_roots(rt.coeffs, rt.disc);
        normalize_dir(roots.l1, roots.m1);
        normalize_dir(roots.l2, roots.m2);
        Eigen::Matrix4d N1 = roots.l1 * M1 + roots.m1 * M2;
        Eigen::Matrix4d N2 = roots.l2 * M1 + roots.m2 * M2;
        Eigen::MatrixXd K2 = kernel_basis(N2, 1e-7);
        Eigen::MatrixXd K1 = kernel_basis(N1, 1e-7);
        if (K1.cols() != 2 || K2.cols() != 2)
            throw FrameError("pencil root is not a rank-2 form (kernels " +
                             std::to_string(K1.cols()) + "," + std::to_string(K2.cols()) + ")");
        Eigen::Vector4d a = K2.col(0), b = K2.col(1);
        const double c1 = a.transpose() * N1 * b;
        Eigen::Vector4d a2 = K1.col(0), b2 = K1.col(1);
        const double c2 = a2.transpose() * N2 * b2;
        if (std::abs(c1) <= tol || std::abs(c2) <= tol)
            throw FrameError("pencil roots share a kernel direction");
        B.col(0) = a;
        B.col(2) = b / c1;
        B.col(1) = a2;
        B.col(3) = b2 / c2;
        t1c1 = roots.l1;
        t1c2 = roots.m1;
        t2c1 = roots.l2;
        t2c2 = roots.m2;
    } else if (rt.cls == PdeClass::Parabolic) {
        double l, m;
        if (std::abs(rt.coeffs.alpha) >= std::abs(rt.coeffs.gamma)) {
            l = -rt.coeffs.beta;
            m = 2 * rt.coeffs.alpha;
        } else {
            l = 2 * rt.coeffs.gamma;
            m = -rt.coeffs.beta;
        }
        normalize_dir(l, m);
        Eigen::Matrix4d N1 = l * M1 + m * M2;
        Eigen::Matrix4d N2 = -m * M1 + l * M2;
        Eigen::MatrixXd K = kernel_basis(N1, 1e-7);
        if (K.cols() != 2)
            throw FrameError("double root is not a rank-2 form (kernel " +
                             std::to_string(K.cols()) + ")");
        Eigen::MatrixXd W = row_space_basis(N1, 1e-7);
        Eigen::Vector4d w1 = W.col(0), w2 = W.col(1);
        const double c = w1.transpose() * N1 * w2;
        if (std::abs(c) <= tol) throw FrameError("degenerate pairing on the root complement");
        Eigen::Vector4d w2n = w2 / c;
        Eigen::Vector4d k1 = K.col(0), k2 = K.col(1);
        Eigen::Matrix2d A;
        A << k1.transpose() * N2 * w1, k2.transpose() * N2 * w1, k1.transpose() * N2 * w2n,
            k2.transpose() * N2 * w2n;
        Eigen::Vector2d rhs1(0, 1), rhs2(-1, 0);
        Eigen::Vector2d x = solve2x2(A, rhs1, tol, "parabolic frame");
        Eigen::Vector2d yv = solve2x2(A, rhs2, tol, "parabolic frame");
        Eigen::Vector4d Xw1 = x(0) * k1 + x(1) * k2;
        Eigen::Vector4d Xp2 = yv(0) * k1 + yv(1) * k2;
        const double beta = w1.transpose() * N2 * w2n;
        Eigen::Vector4d Xw2 = w1 - beta * Xw1;
        B.col(0) = Xw1;
        B.col(1) = Xw2;
        B.col(2) = w2n;
        B.col(3) = Xp2;
        t1c1 = l;
        t1c2 = m;
        t2c1 = -m;
        t2c2 = l;
    } else {
        PencilRoots roots = pencil_roots(rt.coeffs, rt.disc);
        using CM4 = Eigen::Matrix4cd;
        CM4 Nc = roots.lc * M1.cast<std::complex<double>>() + M2.cast<std::complex<double>>();
        Eigen::JacobiSVD<CM4> svd(Nc, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        if (sv(1) <= 1e-7 * sv(0) || sv(2) > 1e-7 * sv(0))
            throw FrameError("complex pencil root is not a rank-2 form");
        Eigen::Vector4cd u = svd.matrixV().col(0).conjugate();
        Eigen::Vector4cd v = svd.matrixV().col(1).conjugate();
        CM4 UV = u * v.transpose() - v * u.transpose();
        int bi = 0, bj = 1;
        double best = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (std::abs(UV(i, j)) > best) {
                    best = std::abs(UV(i, j));
                    bi = i;
                    bj = j;
                }
        if (best == 0) throw FrameError("complex root factorization failed");
        std::complex<double> scale = Nc(bi, bj) / UV(bi, bj);
        Eigen::Vector4cd zeta = scale * u, eta = v;
        // zeta = w1 - i w2, eta = p1 + i p2 as covectors on the sample basis
        Eigen::Matrix4d C;
        C.row(0) = zeta.real().transpose();
        C.row(1) = (-zeta.imag()).transpose();
        C.row(2) = eta.real().transpose();
        C.row(3) = eta.imag().transpose();
        Eigen::JacobiSVD<Eigen::Matrix4d> csvd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto& cs = csvd.singularValues();
        if (cs(3) <= tol * cs(0))
            throw FrameError("adapted covectors are dependent, condition " +
                             fmt_cond(cs(0) / std::max(cs(3), 1e-300)));
        B = C.inverse();
        t1c1 = roots.lc.real();
        t1c2 = 1;
        t2c1 = roots.lc.imag();
        t2c2 = 0;
    }

    af.n1 = B.transpose() * (t1c1 * M1 + t1c2 * M2) * B;
    af.n2 = B.transpose() * (t2c1 * M1 + t2c2 * M2) * B;
    af.residual = std::max((af.n1 - pattern_n1(rt.cls)).norm(), (af.n2 - pattern_n2(rt.cls)).norm());
    af.frame = s.basis * B;

    const Eigen::RowVectorXd g1 = s.gen_covectors.row(rt.active[0]) / mnorm;
    const Eigen::RowVectorXd g2 = s.gen_covectors.row(rt.active[1]) / mnorm;
    af.theta1 = t1c1 * g1 + t1c2 * g2;
    af.theta2 = t2c1 * g1 + t2c2 * g2;
    af.theta0 = s.gen_covectors.row(0);
    return af;
}

int cauchy_characteristic_dim(const DistributionSample& s, double tol) {
    const int k = static_cast<int>(s.curvature.size());
    Eigen::MatrixXd stack(4 * k, 4);
    for (int i = 0; i < k; ++i) stack.middleRows(4 * i, 4) = s.curvature[i];
    return 4 - rank_svd(stack, tol);
}

int curvature_span_rank(const DistributionSample& s, double tol) {
    const int k = static_cast<int>(s.curvature.size());
    Eigen::MatrixXd V(k, 6);
    for (int i = 0; i < k; ++i) {
        const Eigen::Matrix4d& M = s.curvature[i];
        V.row(i) << M(0, 1), M(0, 2), M(0, 3), M(1, 2), M(1, 3), M(2, 3);
    }
    return rank_svd(V, tol);
}

} // namespace eds
