#include "eds/tanaka.hpp"

#include <algorithm>

namespace eds {

DerivedFlag derived_flag(const PfaffianChart& pc, const Eigen::VectorXd& point, bool small_growth,
                         double tol) {
    const int n = pc.dim();
    const int k = pc.corank();
    Env env = env_of(pc.chart, point);

    Eigen::MatrixXd G(k, n);
    for (int i = 0; i < k; ++i) G.row(i) = pc.generators[i].eval(env).as_covector();
    std::vector<Eigen::MatrixXd> dM(k);
    for (int i = 0; i < k; ++i) dM[i] = pc.generators[i].d().eval(env).as_matrix();

    DerivedFlag flag;
    bool u0 = false;
    if (rank_svd(G, tol, &u0) != k)
        throw FrameError("generators are dependent at the point");
    flag.unstable = u0;

    Eigen::MatrixXd D0 = kernel_basis(G, tol);
    Eigen::MatrixXd Cf = Eigen::MatrixXd::Identity(k, k);
    flag.annihilators.push_back(G);
    flag.dims.push_back(n - k);

    while (true) {
        const Eigen::MatrixXd A = Cf * G;
        const int rk = static_cast<int>(Cf.rows());
        if (rk == 0) break;
        Eigen::MatrixXd Dj = kernel_basis(A, tol);
        Eigen::MatrixXd X = small_growth ? D0 : Dj;
        // rows: one constraint per vector pair; cols: current annihilator basis
        std::vector<Eigen::VectorXd> rows;
        for (int a = 0; a < X.cols(); ++a) {
            for (int b = small_growth ? 0 : a + 1; b < Dj.cols(); ++b) {
                Eigen::VectorXd row(rk);
                for (int r = 0; r < rk; ++r) {
                    double val = 0;
                    for (int i = 0; i < k; ++i)
                        if (Cf(r, i) != 0.0)
                            val += Cf(r, i) * (X.col(a).transpose() * dM[i] * Dj.col(b))(0);
                    row(r) = val;
                }
                rows.push_back(row);
            }
        }
        Eigen::MatrixXd R(static_cast<int>(rows.size()), rk);
        for (size_t i = 0; i < rows.size(); ++i) R.row(static_cast<int>(i)) = rows[i];
        bool uj = false;
        rank_svd(R, tol, &uj);
        flag.unstable = flag.unstable || uj;
        Eigen::MatrixXd ker = kernel_basis(R, tol);
        Cf = (Cf.transpose() * ker).transpose();
        const int dim_next = n - static_cast<int>(Cf.rows());
        flag.annihilators.push_back(Cf * G);
        const int dim_prev = flag.dims.back();
        flag.dims.push_back(dim_next);
        if (dim_next == dim_prev || Cf.rows() == 0) break;
    }
    return flag;
}

std::vector<int> canonical_levels(const PfaffianChart& pc) {
    std::vector<int> levels;
    for (const auto& lab : pc.gen_labels) {
        if (lab == "c0")
            levels.push_back(-4);
        else if (lab == "c1" || lab == "c2")
            levels.push_back(-3);
        else
            levels.push_back(-2);
    }
    for (size_t i = 0; i < pc.comp_labels.size(); ++i) levels.push_back(-1);
    return levels;
}

SymbolAlgebra symbol_algebra(const PfaffianChart& pc, const Eigen::VectorXd& point,
                             const std::vector<int>& levels) {
    const int n = pc.dim();
    const int k = pc.corank();
    if (static_cast<int>(levels.size()) != n)
        throw std::invalid_argument("one level per coframe element required");
    Env env = env_of(pc.chart, point);

    Eigen::MatrixXd coframe(n, n);
    for (int i = 0; i < k; ++i) coframe.row(i) = pc.generators[i].eval(env).as_covector();
    for (int i = 0; i < n - k; ++i)
        coframe.row(k + i) = pc.complement[i].eval(env).as_covector();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(coframe);
    if (!lu.isInvertible()) throw FrameError("coframe is degenerate at the point");
    Eigen::MatrixXd frame = lu.inverse();

    SymbolAlgebra s;
    s.labels = pc.gen_labels;
    s.labels.insert(s.labels.end(), pc.comp_labels.begin(), pc.comp_labels.end());
    s.levels = levels;
    s.corank = k;
    for (int g = 0; g < k; ++g) {
        Eigen::MatrixXd dM = pc.generators[g].d().eval(env).as_matrix();
        s.c.push_back(-(frame.transpose() * dM * frame));
    }
    const int depth = -*std::min_element(levels.begin(), levels.end());
    s.graded_dims.assign(depth, 0);
    for (int lv : levels) ++s.graded_dims[-lv - 1];
    return s;
}

namespace {

std::vector<int> indices_at_level(const SymbolAlgebra& s, int level) {
    std::vector<int> out;
    for (size_t i = 0; i < s.levels.size(); ++i)
        if (s.levels[i] == level) out.push_back(static_cast<int>(i));
    return out;
}

} // namespace

std::vector<int> bracket_image_dims(const SymbolAlgebra& s, double tol) {
    std::vector<int> out;
    for (int j = 1; j < s.depth(); ++j) {
        auto src1 = indices_at_level(s, -1);
        auto srcj = indices_at_level(s, -j);
        auto tgt = indices_at_level(s, -j - 1);
        std::vector<Eigen::VectorXd> vecs;
        for (int a : src1)
            for (int b : srcj) {
                Eigen::VectorXd v(static_cast<int>(tgt.size()));
                for (size_t t = 0; t < tgt.size(); ++t)
                    v(static_cast<int>(t)) = tgt[t] < s.corank ? s.c[tgt[t]](a, b) : 0.0;
                vecs.push_back(v);
            }
        Eigen::MatrixXd M(static_cast<int>(vecs.size()), static_cast<int>(tgt.size()));
        for (size_t i = 0; i < vecs.size(); ++i) M.row(static_cast<int>(i)) = vecs[i];
        out.push_back(vecs.empty() || tgt.empty() ? 0 : rank_svd(M, tol));
    }
    return out;
}

std::vector<bool> generating_condition(const SymbolAlgebra& s, double tol) {
    auto imgs = bracket_image_dims(s, tol);
    std::vector<bool> out;
    for (int j = 1; j < s.depth(); ++j) out.push_back(imgs[j - 1] == s.graded_dims[j]);
    return out;
}

int top_pairing_rank(const SymbolAlgebra& s, double tol) {
    const int depth = s.depth();
    auto src1 = indices_at_level(s, -1);
    auto srcp = indices_at_level(s, -(depth - 1));
    auto tgt = indices_at_level(s, -depth);
    if (tgt.size() != 1 || tgt[0] >= s.corank) return -1;
    Eigen::MatrixXd M(static_cast<int>(src1.size()), static_cast<int>(srcp.size()));
    for (size_t a = 0; a < src1.size(); ++a)
        for (size_t b = 0; b < srcp.size(); ++b)
            M(static_cast<int>(a), static_cast<int>(b)) = s.c[tgt[0]](src1[a], srcp[b]);
    return rank_svd(M, tol);
}

double jacobi_residual(const SymbolAlgebra& s) {
    const int n = static_cast<int>(s.levels.size());
    auto bracket_basis = [&](int a, int b) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
        for (int g = 0; g < s.corank; ++g)
            if (s.level_matched(g, a, b)) w(g) = s.c[g](a, b);
        return w;
    };
    auto bracket_vec = [&](const Eigen::VectorXd& w, int cidx) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
        for (int a = 0; a < n; ++a)
            if (w(a) != 0.0) out += w(a) * bracket_basis(a, cidx);
        return out;
    };
    double worst = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int cdx = b + 1; cdx < n; ++cdx) {
                Eigen::VectorXd J = bracket_vec(bracket_basis(a, b), cdx) +
                                    bracket_vec(bracket_basis(b, cdx), a) +
                                    bracket_vec(bracket_basis(cdx, a), b);
                worst = std::max(worst, J.cwiseAbs().maxCoeff());
            }
    return worst;
}

std::vector<int> reference_layers(PdeClass cls) {
    if (cls == PdeClass::Elliptic) return {0, 2};
    if (cls == PdeClass::Hyperbolic || cls == PdeClass::Parabolic) return {0, 1, 2};
    throw std::invalid_argument("no reference symbols for this class");
}

RefSymbol reference_symbol(PdeClass cls, int m) {
    RefSymbol r;
    r.cls = cls;
    r.m = m;
    using E = std::array<std::string, 3>;
    if (cls == PdeClass::Hyperbolic) {
        if (m == 0) {
            r.chart_id = "I";
            r.u = 0.4;
            r.v = -0.7;
            r.brackets = {E{"u1", "w1", "P11"}, E{"v1", "w2", "P22"}, E{"P11", "w1", "c1"},
                          E{"P22", "w2", "c2"}, E{"c1", "w1", "c0"},  E{"c2", "w2", "c0"}};
        } else if (m == 1) {
            r.chart_id = "III";
            r.u = 0.0;
            r.v = 0.6;
            r.brackets = {E{"u1", "p22", "W2"}, E{"v1", "w1", "P11"}, E{"P11", "w1", "c1"},
                          E{"p22", "W2", "c2"}, E{"c1", "w1", "c0"}};
        } else {
            r.chart_id = "VI";
            r.brackets = {E{"u1", "p11", "W1"}, E{"v1", "p22", "W2"}, E{"p11", "W1", "c1"},
                          E{"p22", "W2", "c2"}};
        }
        return r;
    }
    if (cls == PdeClass::Parabolic) {
        if (m == 0) {
            r.chart_id = "I";
            r.u = 0.5;
            r.v = 0.3;
            r.brackets = {E{"u1", "w2", "P12"}, E{"u1", "w1", "P22"}, E{"v1", "w2", "P22"},
                          E{"P12", "w2", "c1"}, E{"P12", "w1", "c2"}, E{"P22", "w2", "c2"},
                          E{"c1", "w1", "c0"},  E{"c2", "w2", "c0"}};
        } else if (m == 1) {
            r.chart_id = "VI";
            r.u = 0.8;
            r.v = 0.0;
            r.brackets = {E{"u1", "p12", "W1"}, E{"v1", "p22", "W1"}, E{"v1", "p12", "W2"},
                          E{"p12", "W2", "c1"}, E{"p12", "W1", "c2"}, E{"p22", "W2", "c2"},
                          E{"c1", "p12", "c0"}};
        } else {
            r.chart_id = "VI";
            r.brackets = {E{"u1", "p12", "W1"}, E{"v1", "p22", "W1"}, E{"v1", "p12", "W2"},
                          E{"p12", "W2", "c1"}, E{"p12", "W1", "c2"}, E{"p22", "W2", "c2"}};
        }
        return r;
    }
    if (cls == PdeClass::Elliptic) {
        if (m == 0) {
            r.chart_id = "I";
            r.u = -0.6;
            r.v = 0.2;
            r.brackets = {E{"u1", "w1", "P11"}, E{"v1", "w2", "P11"}, E{"v1", "w1", "P12"},
                          E{"w2", "u1", "P12"}, E{"P11", "w1", "c1"}, E{"P12", "w2", "c1"},
                          E{"P12", "w1", "c2"}, E{"w2", "P11", "c2"}, E{"c1", "w1", "c0"},
                          E{"c2", "w2", "c0"}};
        } else if (m == 2) {
            r.chart_id = "VI";
            r.brackets = {E{"u1", "p11", "W1"}, E{"v1", "p12", "W1"}, E{"v1", "p11", "W2"},
                          E{"p12", "u1", "W2"}, E{"p11", "W1", "c1"}, E{"p12", "W2", "c1"},
                          E{"p12", "W1", "c2"}, E{"W2", "p11", "c2"}};
        } else {
            throw std::invalid_argument("elliptic fibers have no middle layer");
        }
        return r;
    }
    throw std::invalid_argument("no reference symbols for this class");
}

SymbolComparison compare_symbol(const SymbolAlgebra& s, const RefSymbol& ref, double tol) {
    SymbolComparison cmp;
    const int n = static_cast<int>(s.levels.size());
    std::unordered_map<std::string, int> idx;
    for (int i = 0; i < n; ++i) idx[s.labels[i]] = i;

    // expected[g](a,b) = +-1 per table entry, antisymmetrized
    std::vector<Eigen::MatrixXd> expected(s.corank, Eigen::MatrixXd::Zero(n, n));
    for (const auto& e : ref.brackets) {
        auto ia = idx.find(e[0]), ib = idx.find(e[1]), ig = idx.find(e[2]);
        if (ia == idx.end() || ib == idx.end() || ig == idx.end() || ig->second >= s.corank)
            throw std::invalid_argument("reference bracket label missing from the chart");
        expected[ig->second](ia->second, ib->second) = 1;
        expected[ig->second](ib->second, ia->second) = -1;
    }

    cmp.support_match = true;
    cmp.unit_scale = true;
    const double cut = 10 * tol;
    for (int g = 0; g < s.corank; ++g)
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) {
                if (!s.level_matched(g, a, b)) continue;
                const double got = s.c[g](a, b);
                const double want = expected[g](a, b);
                if (want == 0.0) {
                    if (std::abs(got) > cut) cmp.support_match = false;
                } else {
                    if (std::abs(got) <= cut) cmp.support_match = false;
                    if (std::abs(std::abs(got) - 1.0) > 1e-7) cmp.unit_scale = false;
                }
            }

    cmp.graded_dims = s.graded_dims;
    cmp.image_dims = bracket_image_dims(s, tol);
    cmp.generating = generating_condition(s, tol);
    cmp.pairing_rank = top_pairing_rank(s, tol);
    cmp.jacobi = jacobi_residual(s);

    const int want_pairing = ref.m == 0 ? 2 : (ref.m == 1 ? 1 : 0);
    bool fp = cmp.graded_dims == std::vector<int>{4, 2, 2, 1};
    fp = fp && cmp.image_dims.size() == 3 && cmp.image_dims[0] == 2 && cmp.image_dims[1] == 2 &&
         cmp.image_dims[2] == (ref.m == 2 ? 0 : 1);
    fp = fp && cmp.pairing_rank == want_pairing;
    fp = fp && cmp.jacobi < 1e-9;
    cmp.reference_match = cmp.support_match && fp;
    return cmp;
}

} // namespace eds
