#include "eds/prolong.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace eds {

namespace {

Expr ev(const char* n) { return Expr::var(n); }
Expr K(long long k) { return Expr::constant(Rational(k)); }

Chart fiber_pchart() { return Chart({"p11", "p12", "p21", "p22"}); }

const std::array<std::pair<int, int>, 6> kPairs{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
const std::array<const char*, 6> kChartIds{"I", "II", "III", "IV", "V", "VI"};

FiberChart make_chart(PdeClass cls, int pair_index) {
    FiberChart fc;
    fc.id = kChartIds[pair_index];
    fc.a = kPairs[pair_index].first;
    fc.b = kPairs[pair_index].second;
    std::vector<int> rest;
    for (int i = 0; i < 4; ++i)
        if (i != fc.a && i != fc.b) rest.push_back(i);
    fc.c = rest[0];
    fc.d = rest[1];
    fc.labels = model_surface_chart(cls).comp_labels;
    fc.pchart = fiber_pchart();
    return fc;
}

} // namespace

std::vector<FiberChart> reference_fiber_charts(PdeClass cls) {
    std::vector<FiberChart> out;
    Expr p11 = ev("p11"), p12 = ev("p12"), p21 = ev("p21"), p22 = ev("p22");
    for (int k = 0; k < 6; ++k) out.push_back(make_chart(cls, k));
    switch (cls) {
        case PdeClass::Hyperbolic:
            out[0].f1 = p12;
            out[0].f2 = p21;
            out[1].empty = true;
            out[2].f1 = p22;
            out[2].f2 = p11;
            out[3].f1 = p11;
            out[3].f2 = p22;
            out[4].empty = true;
            out[5].f1 = p12;
            out[5].f2 = p21;
            break;
        case PdeClass::Parabolic:
            out[0].f1 = p11;
            out[0].f2 = p12 - p21;
            out[1].f1 = p11;
            out[1].f2 = K(1) + p11 * p22 - p12 * p21;
            out[2].f1 = p11 * p22 - p12 * p21;
            out[2].f2 = p11 + p22;
            out[3].empty = true;
            out[4].f1 = p22;
            out[4].f2 = K(1) + p11 * p22 - p12 * p21;
            out[5].f1 = p22;
            out[5].f2 = p21 - p12;
            break;
        case PdeClass::Elliptic:
            out[0].f1 = p12 - p21;
            out[0].f2 = p11 + p22;
            out[1].f1 = K(1) + p11 * p22 - p12 * p21;
            out[1].f2 = p22 - p11;
            out[2].f1 = p11 + p22;
            out[2].f2 = K(1) - p11 * p22 + p12 * p21;
            out[3].f1 = p11 + p22;
            out[3].f2 = p11 * p22 - p12 * p21 - K(1);
            out[4].f1 = K(1) + p11 * p22 - p12 * p21;
            out[4].f2 = p11 - p22;
            out[5].f1 = p21 - p12;
            out[5].f2 = p11 + p22;
            break;
        default: throw std::invalid_argument("no fiber tables for this class");
    }
    for (auto& fc : out)
        if (fc.empty) {
            fc.f1 = K(1);
            fc.f2 = K(1);
        }
    return out;
}

FiberChart derive_fiber_chart(PdeClass cls, int pair_index) {
    FiberChart fc = make_chart(cls, pair_index);
    const Eigen::Matrix4d N1 = pattern_n1(cls), N2 = pattern_n2(cls);
    // u1 = e_a + p11 e_c + p21 e_d, u2 = e_b + p12 e_c + p22 e_d
    std::array<Expr, 4> u1{K(0), K(0), K(0), K(0)}, u2 = u1;
    u1[fc.a] = K(1);
    u1[fc.c] = ev("p11");
    u1[fc.d] = ev("p21");
    u2[fc.b] = K(1);
    u2[fc.c] = ev("p12");
    u2[fc.d] = ev("p22");
    auto contract = [&](const Eigen::Matrix4d& N) {
        Expr s = K(0);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                if (N(i, j) != 0.0)
                    s = s + Expr::constant(Rational(static_cast<long long>(N(i, j)))) *
                                (u1[i] * u2[j] - u1[j] * u2[i]);
        return s;
    };
    fc.f1 = contract(N1);
    fc.f2 = contract(N2);
    // a chart is empty when one equation is a nonzero constant
    auto const_nonzero = [](const Expr& f) {
        Env zero{{"p11", 0}, {"p12", 0}, {"p21", 0}, {"p22", 0}};
        const double c0 = f.eval(zero);
        if (std::abs(c0) < 0.5) return false;
        Expr shifted = f - Expr::constant(Rational(std::llround(c0)));
        return is_zero_probabilistic(shifted, Chart({"p11", "p12", "p21", "p22"}));
    };
    fc.empty = const_nonzero(fc.f1) || const_nonzero(fc.f2);
    return fc;
}

std::vector<int> covering_subatlas(PdeClass cls) {
    switch (cls) {
        case PdeClass::Hyperbolic: return {0, 2, 3, 5};
        case PdeClass::Parabolic: return {0, 2, 5};
        case PdeClass::Elliptic: return {0, 5};
        default: throw std::invalid_argument("no covering subfamily for this class");
    }
}

Eigen::Matrix<double, 4, 2> plane_of_chart_point(const FiberChart& fc, const Eigen::Matrix2d& p) {
    Eigen::Matrix<double, 4, 2> E = Eigen::Matrix<double, 4, 2>::Zero();
    E(fc.a, 0) = 1;
    E(fc.c, 0) = p(0, 0);
    E(fc.d, 0) = p(1, 0);
    E(fc.b, 1) = 1;
    E(fc.c, 1) = p(0, 1);
    E(fc.d, 1) = p(1, 1);
    return E;
}

bool plane_in_chart(const Eigen::Matrix<double, 4, 2>& E, const FiberChart& fc, double tol) {
    Eigen::Matrix2d P;
    P << E(fc.a, 0), E(fc.a, 1), E(fc.b, 0), E(fc.b, 1);
    const double scale = E.colwise().norm().prod();
    return std::abs(P.determinant()) > tol * std::max(scale, 1e-300);
}

Eigen::Matrix2d chart_params_of_plane(const Eigen::Matrix<double, 4, 2>& E, const FiberChart& fc,
                                      double tol) {
    Eigen::Matrix2d P;
    P << E(fc.a, 0), E(fc.a, 1), E(fc.b, 0), E(fc.b, 1);
    const double scale = E.colwise().norm().prod();
    if (std::abs(P.determinant()) <= tol * std::max(scale, 1e-300))
        throw DegenerateBasis("plane is not transverse to the target chart");
    Eigen::Matrix<double, 4, 2> V = E * P.inverse();
    Eigen::Matrix2d p;
    p << V(fc.c, 0), V(fc.c, 1), V(fc.d, 0), V(fc.d, 1);
    return p;
}

Eigen::Matrix2d fiber_transition(const FiberChart& from, const Eigen::Matrix2d& pfrom,
                                 const FiberChart& to, double tol) {
    return chart_params_of_plane(plane_of_chart_point(from, pfrom), to, tol);
}

Eigen::Matrix2d sample_on_variety(const FiberChart& fc, PdeClass cls, std::mt19937_64& rng) {
    if (fc.empty) throw std::invalid_argument("chart " + fc.id + " carries no integral planes");
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    auto nonzero = [&]() {
        double v = 0;
        while (std::abs(v) < 0.2) v = u(rng);
        return v;
    };
    Eigen::Matrix2d p = Eigen::Matrix2d::Zero();
    const int k = (fc.id == "I")     ? 0
                  : (fc.id == "II")  ? 1
                  : (fc.id == "III") ? 2
                  : (fc.id == "IV")  ? 3
                  : (fc.id == "V")   ? 4
                                     : 5;
    if (cls == PdeClass::Hyperbolic) {
        // two parameters survive, the two table entries vanish
        if (k == 0 || k == 5) {
            p(0, 0) = u(rng);
            p(1, 1) = u(rng);
        } else if (k == 2 || k == 3) {
            p(0, 1) = u(rng);
            p(1, 0) = u(rng);
        } else {
            throw std::invalid_argument("empty chart");
        }
    } else if (cls == PdeClass::Parabolic) {
        if (k == 0) {
            const double c = u(rng);
            p(0, 1) = p(1, 0) = c;
            p(1, 1) = u(rng);
        } else if (k == 1) {
            const double c = nonzero();
            p(1, 0) = c;
            p(0, 1) = 1.0 / c;
            p(1, 1) = u(rng);
        } else if (k == 2) {
            const double a = u(rng), b = nonzero();
            p(0, 0) = a;
            p(1, 1) = -a;
            p(1, 0) = b;
            p(0, 1) = -a * a / b;
        } else if (k == 4) {
            const double c = nonzero();
            p(1, 0) = c;
            p(0, 1) = 1.0 / c;
            p(0, 0) = u(rng);
        } else if (k == 5) {
            const double c = u(rng);
            p(0, 1) = p(1, 0) = c;
            p(0, 0) = u(rng);
        } else {
            throw std::invalid_argument("empty chart");
        }
    } else if (cls == PdeClass::Elliptic) {
        const double a = u(rng);
        if (k == 0 || k == 5) {
            p(0, 0) = a;
            p(1, 1) = -a;
            const double c = u(rng);
            p(0, 1) = p(1, 0) = c;
        } else if (k == 1) {
            p(0, 0) = p(1, 1) = a;
            const double c = nonzero();
            p(1, 0) = c;
            p(0, 1) = (1 + a * a) / c;
        } else if (k == 2 || k == 3) {
            p(0, 0) = a;
            p(1, 1) = -a;
            const double c = nonzero();
            p(1, 0) = c;
            p(0, 1) = -(1 + a * a) / c;
        } else {
            p(0, 0) = p(1, 1) = a;
            const double c = nonzero();
            p(1, 0) = c;
            p(0, 1) = (1 + a * a) / c;
        }
    } else {
        throw std::invalid_argument("no fiber for this class");
    }
    return p;
}

Eigen::Matrix<double, 6, 1> plucker_of_plane(const Eigen::Matrix<double, 4, 2>& E) {
    Eigen::Matrix<double, 6, 1> xi;
    auto minor2 = [&E](int i, int j) { return E(i, 0) * E(j, 1) - E(j, 0) * E(i, 1); };
    xi << minor2(0, 1), minor2(0, 2), minor2(0, 3), minor2(1, 2), minor2(1, 3), minor2(2, 3);
    return xi;
}

std::string fiber_topology_name(FiberTopology t) {
    switch (t) {
        case FiberTopology::Torus: return "torus";
        case FiberTopology::Sphere: return "sphere";
        case FiberTopology::PinchedTorus: return "pinched-torus";
        case FiberTopology::Other: return "other";
    }
    return "unknown";
}

FiberTopology expected_topology(PdeClass cls) {
    switch (cls) {
        case PdeClass::Hyperbolic: return FiberTopology::Torus;
        case PdeClass::Parabolic: return FiberTopology::PinchedTorus;
        case PdeClass::Elliptic: return FiberTopology::Sphere;
        default: return FiberTopology::Other;
    }
}

namespace {

// Klein form xi01*xi23 - xi02*xi13 + xi03*xi12 as a symmetric matrix
Eigen::MatrixXd klein_matrix() {
    Eigen::MatrixXd Km = Eigen::MatrixXd::Zero(6, 6);
    Km(0, 5) = Km(5, 0) = 0.5;
    Km(1, 4) = Km(4, 1) = -0.5;
    Km(2, 3) = Km(3, 2) = 0.5;
    return Km;
}

} // namespace

FiberReport fiber_topology(const DistributionSample& s, double tol) {
    FiberReport rep;
    Rank4Type rt = rank4_type(s, tol);
    if (rt.cls == PdeClass::Degenerate) {
        rep.note = "curvature pencil is degenerate";
        return rep;
    }
    Eigen::MatrixXd L(2, 6);
    for (int k = 0; k < 2; ++k) {
        const Eigen::Matrix4d& M = s.curvature[rt.active[k]];
        L.row(k) << M(0, 1), M(0, 2), M(0, 3), M(1, 2), M(1, 3), M(2, 3);
    }
    if (rank_svd(L, tol) != 2) {
        rep.note = "plane constraints are dependent";
        return rep;
    }
    rep.W = kernel_basis(L, tol);
    rep.Q = rep.W.transpose() * klein_matrix() * rep.W;
    rep.sig = signature_sym(rep.Q, tol);
    const Signature& g = rep.sig;
    if (g == Signature{2, 2, 0}) {
        rep.topology = FiberTopology::Torus;
    } else if (g == Signature{3, 1, 0} || g == Signature{1, 3, 0}) {
        rep.topology = FiberTopology::Sphere;
    } else if (g == Signature{2, 1, 1} || g == Signature{1, 2, 1}) {
        rep.topology = FiberTopology::PinchedTorus;
        Eigen::MatrixXd kerq = kernel_basis(rep.Q, 1e-7);
        for (int i = 0; i < kerq.cols(); ++i) {
            Eigen::Matrix<double, 6, 1> dir = rep.W * kerq.col(i);
            dir.normalize();
            for (int j = 0; j < 6; ++j) {
                if (std::abs(dir(j)) > 1e-12) {
                    if (dir(j) < 0) dir = -dir;
                    break;
                }
            }
            rep.singular_dirs.push_back(dir);
        }
    } else {
        rep.topology = FiberTopology::Other;
        rep.note = "signature (" + std::to_string(g.pos) + "," + std::to_string(g.neg) + "," +
                   std::to_string(g.zero) + ")";
    }
    return rep;
}

namespace {

struct UnionFind {
    std::vector<int> up;
    explicit UnionFind(int n) : up(n) {
        for (int i = 0; i < n; ++i) up[i] = i;
    }
    int find(int i) {
        while (up[i] != i) i = up[i] = up[up[i]];
        return i;
    }
    void join(int i, int j) { up[find(i)] = find(j); }
};

} // namespace

MeshReport fiber_mesh_oracle(const Eigen::MatrixXd& Q, long min_cells, uint64_t seed) {
    if (Q.rows() != 4 || Q.cols() != 4) throw std::invalid_argument("oracle needs a 4x4 form");
    MeshReport rep;

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(Q);
    double emax = 0;
    for (int i = 0; i < 4; ++i) emax = std::max(emax, std::abs(es.eigenvalues()(i)));
    if (emax == 0) throw std::invalid_argument("zero form has no surface");
    // a fixed random rotation moves mesh vertices off special positions
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Matrix4d G;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) G(i, j) = gauss(rng);
    Eigen::HouseholderQR<Eigen::Matrix4d> qr(G);
    Eigen::Matrix4d R = qr.householderQ();
    Eigen::Matrix4d Qr = R.transpose() * (Q / emax) * R;

    int k = 0;
    long cells = 16;
    while (cells < min_cells && k < 6) {
        ++k;
        cells *= 8;
    }
    rep.subdivisions = k;

    std::vector<Eigen::Vector4d> verts;
    verts.reserve(static_cast<size_t>(cells / 4));
    for (int i = 0; i < 4; ++i) {
        Eigen::Vector4d e = Eigen::Vector4d::Zero();
        e(i) = 1;
        verts.push_back(e);
        verts.push_back(-e);
    }
    std::vector<std::array<int, 4>> tets;
    for (int m = 0; m < 16; ++m)
        tets.push_back({0 + (m & 1), 2 + ((m >> 1) & 1), 4 + ((m >> 2) & 1), 6 + ((m >> 3) & 1)});

    std::unordered_map<long long, int> midcache;
    auto mid = [&](int i, int j) {
        const long long key = (static_cast<long long>(std::min(i, j)) << 32) | std::max(i, j);
        auto it = midcache.find(key);
        if (it != midcache.end()) return it->second;
        Eigen::Vector4d m = (verts[i] + verts[j]).normalized();
        const int id = static_cast<int>(verts.size());
        verts.push_back(m);
        midcache.emplace(key, id);
        return id;
    };
    for (int step = 0; step < k; ++step) {
        std::vector<std::array<int, 4>> next;
        next.reserve(tets.size() * 8);
        for (const auto& T : tets) {
            const int a = T[0], b = T[1], c = T[2], d = T[3];
            const int ab = mid(a, b), ac = mid(a, c), ad = mid(a, d), bc = mid(b, c),
                      bd = mid(b, d), cd = mid(c, d);
            next.push_back({a, ab, ac, ad});
            next.push_back({ab, b, bc, bd});
            next.push_back({ac, bc, c, cd});
            next.push_back({ad, bd, cd, d});
            next.push_back({ac, bd, ab, ad});
            next.push_back({ac, bd, ad, cd});
            next.push_back({ac, bd, cd, bc});
            next.push_back({ac, bd, bc, ab});
        }
        tets.swap(next);
        midcache.clear();
    }

    std::vector<double> val(verts.size());
    for (size_t i = 0; i < verts.size(); ++i) {
        double v = verts[i].transpose() * Qr * verts[i];
        if (std::abs(v) < 1e-13) v = 1e-13;  // consistent for antipodal pairs
        val[i] = v;
    }

    std::vector<Eigen::Vector4d> sv;
    std::vector<std::array<int, 3>> tris;
    std::unordered_map<long long, int> edgecut;
    auto cut = [&](int i, int j) {
        const long long key = (static_cast<long long>(std::min(i, j)) << 32) | std::max(i, j);
        auto it = edgecut.find(key);
        if (it != edgecut.end()) return it->second;
        const double t = val[i] / (val[i] - val[j]);
        Eigen::Vector4d x = verts[i] + t * (verts[j] - verts[i]);
        x.normalize();
        const int id = static_cast<int>(sv.size());
        sv.push_back(x);
        edgecut.emplace(key, id);
        return id;
    };
    for (const auto& T : tets) {
        std::array<int, 4> pos{}, neg{};
        int np = 0, nn = 0;
        for (int vtx : T) (val[vtx] > 0 ? pos[np++] : neg[nn++]) = vtx;
        if (np == 0 || np == 4) continue;
        if (np == 1) {
            tris.push_back({cut(pos[0], neg[0]), cut(pos[0], neg[1]), cut(pos[0], neg[2])});
        } else if (np == 3) {
            tris.push_back({cut(neg[0], pos[0]), cut(neg[0], pos[1]), cut(neg[0], pos[2])});
        } else {
            const int v1 = cut(pos[0], neg[0]), v2 = cut(pos[0], neg[1]), v3 = cut(pos[1], neg[1]),
                      v4 = cut(pos[1], neg[0]);
            tris.push_back({v1, v2, v3});
            tris.push_back({v1, v3, v4});
        }
    }

    rep.vertices = static_cast<long>(sv.size());
    rep.triangles = static_cast<long>(tris.size());

    std::unordered_set<long long> edges;
    UnionFind uf(static_cast<int>(sv.size()));
    for (const auto& T : tris) {
        for (int e = 0; e < 3; ++e) {
            const int i = T[e], j = T[(e + 1) % 3];
            edges.insert((static_cast<long long>(std::min(i, j)) << 32) | std::max(i, j));
            uf.join(i, j);
        }
    }
    rep.euler_cover = static_cast<double>(sv.size()) - static_cast<double>(edges.size()) +
                      static_cast<double>(tris.size());
    rep.euler_quotient = rep.euler_cover / 2.0;

    std::unordered_map<int, int> comp_id;
    std::vector<Eigen::Vector4d> centroid;
    std::vector<long> csize;
    for (size_t i = 0; i < sv.size(); ++i) {
        const int r = uf.find(static_cast<int>(i));
        auto it = comp_id.find(r);
        int c;
        if (it == comp_id.end()) {
            c = static_cast<int>(centroid.size());
            comp_id.emplace(r, c);
            centroid.push_back(Eigen::Vector4d::Zero());
            csize.push_back(0);
        } else {
            c = it->second;
        }
        centroid[c] += sv[i];
        ++csize[c];
    }
    rep.components_cover = static_cast<int>(centroid.size());
    for (size_t c = 0; c < centroid.size(); ++c) centroid[c] /= static_cast<double>(csize[c]);

    // orbits of components under the antipodal map
    std::vector<char> seen(centroid.size(), 0);
    int orbits = 0;
    for (size_t i = 0; i < centroid.size(); ++i) {
        if (seen[i]) continue;
        seen[i] = 1;
        ++orbits;
        double best = 1e18;
        int bj = -1;
        for (size_t j = 0; j < centroid.size(); ++j) {
            const double dmatch = (centroid[j] + centroid[i]).norm();
            if (dmatch < best) {
                best = dmatch;
                bj = static_cast<int>(j);
            }
        }
        if (bj >= 0 && !seen[bj]) seen[bj] = 1;
    }
    rep.components_quotient = orbits;

    // near-singular surface vertices cluster around conical points
    const double h = std::sqrt(2.0) / std::pow(2.0, k);
    std::vector<int> flagged;
    for (size_t i = 0; i < sv.size(); ++i)
        if ((Qr * sv[i]).norm() <= 3.0 * h) flagged.push_back(static_cast<int>(i));
    UnionFind cf(static_cast<int>(flagged.size()));
    for (size_t i = 0; i < flagged.size(); ++i)
        for (size_t j = i + 1; j < flagged.size(); ++j)
            if ((sv[flagged[i]] - sv[flagged[j]]).norm() <= 2.0 * h)
                cf.join(static_cast<int>(i), static_cast<int>(j));
    std::unordered_set<int> roots;
    for (size_t i = 0; i < flagged.size(); ++i) roots.insert(cf.find(static_cast<int>(i)));
    rep.singular_pairs = static_cast<int>(roots.size()) / 2;
    return rep;
}

std::string stratum_name(Stratum s) {
    switch (s) {
        case Stratum::S0: return "S0";
        case Stratum::S1: return "S1";
        case Stratum::S2: return "S2";
    }
    return "unknown";
}

namespace {

// stratum from the rank of (dx, dy) restricted to the plane dual to the first
// two complement entries
Stratum base_transversality_stratum(const PfaffianChart& pc, const Eigen::VectorXd& pt,
                                    double tol) {
    const int n = pc.dim();
    Env env = env_of(pc.chart, pt);
    Eigen::MatrixXd coframe(n, n);
    const int kgen = pc.corank();
    for (int i = 0; i < kgen; ++i) coframe.row(i) = pc.generators[i].eval(env).as_covector();
    for (size_t i = 0; i < pc.complement.size(); ++i)
        coframe.row(kgen + static_cast<int>(i)) = pc.complement[i].eval(env).as_covector();
    Eigen::MatrixXd dual = coframe.inverse();
    Eigen::VectorXd u1 = dual.col(kgen), u2 = dual.col(kgen + 1);
    const int ix = pc.chart.index_of("x"), iy = pc.chart.index_of("y");
    if (ix < 0 || iy < 0) throw std::invalid_argument("chart lacks base coordinates");
    Eigen::Matrix2d T;
    T << u1(ix), u2(ix), u1(iy), u2(iy);
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(T);
    int rank = 0;
    for (int i = 0; i < 2; ++i)
        if (svd.singularValues()(i) > tol) ++rank;
    return rank == 2 ? Stratum::S0 : (rank == 1 ? Stratum::S1 : Stratum::S2);
}

} // namespace

PfaffianChart prolong_rank4(const PfaffianChart& pc, PdeClass cls, int level) {
    if (pc.complement.size() != 4)
        throw std::invalid_argument("prolongation needs a rank-4 complement");

    // the complement must restrict the two active curvatures to the flat patterns
    {
        std::mt19937_64 rng(977 + level);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        Eigen::VectorXd pt(pc.dim());
        for (int i = 0; i < pc.dim(); ++i) pt(i) = 0.5 * u(rng);
        DistributionSample s = sample_chart(std::make_shared<PfaffianChart>(pc), pt);
        Rank4Type rt = rank4_type(s);
        if (rt.cls != cls)
            throw std::invalid_argument("chart plane field is " + pde_class_name(rt.cls) +
                                        ", expected " + pde_class_name(cls));
        Env env = env_of(pc.chart, pt);
        Eigen::MatrixXd C(4, pc.dim());
        for (int i = 0; i < 4; ++i) C.row(i) = pc.complement[i].eval(env).as_covector();
        // frame of the plane field dual to the complement
        Eigen::MatrixXd A(4, 4);
        A = C * s.basis;
        Eigen::Matrix4d B = A.inverse();
        for (int which = 0; which < 2; ++which) {
            Eigen::Matrix4d M =
                B.transpose() * s.curvature[rt.active[which]].cast<double>() * B;
            const Eigen::Matrix4d P = which == 0 ? pattern_n1(cls) : pattern_n2(cls);
            // active order may come out swapped; accept either assignment
            Eigen::Matrix4d Palt = which == 0 ? pattern_n2(cls) : pattern_n1(cls);
            if ((M - P).norm() > 1e-9 && (M - Palt).norm() > 1e-9)
                throw std::invalid_argument(
                    "complement is not an adapted coframe in graph position");
        }
    }

    const std::string un = "u" + std::to_string(level), vn = "v" + std::to_string(level);
    std::vector<std::string> coords;
    for (int i = 0; i < pc.dim(); ++i) coords.push_back(pc.chart.coord(i));
    coords.push_back(un);
    coords.push_back(vn);

    PfaffianChart out;
    out.id = pc.id + "+";
    out.chart = Chart(coords);
    for (size_t i = 0; i < pc.generators.size(); ++i) {
        out.generators.push_back(pc.generators[i].rechart(out.chart));
        out.gen_labels.push_back(pc.gen_labels[i]);
    }
    Form w1 = pc.complement[0].rechart(out.chart);
    Form w2 = pc.complement[1].rechart(out.chart);
    Form g1 = pc.complement[2].rechart(out.chart);
    Form g2 = pc.complement[3].rechart(out.chart);
    Expr uu = Expr::var(un), vv = Expr::var(vn);
    switch (cls) {
        case PdeClass::Hyperbolic:
            out.generators.push_back(g1 - w1 * uu);
            out.generators.push_back(g2 - w2 * vv);
            break;
        case PdeClass::Parabolic:
            out.generators.push_back(g1 - w2 * uu);
            out.generators.push_back(g2 - w1 * uu - w2 * vv);
            break;
        case PdeClass::Elliptic:
            out.generators.push_back(g1 - w1 * uu - w2 * vv);
            out.generators.push_back(g2 - w1 * vv + w2 * uu);
            break;
        default: throw std::invalid_argument("cannot prolong this class");
    }
    out.gen_labels.push_back("n" + std::to_string(level) + "a");
    out.gen_labels.push_back("n" + std::to_string(level) + "b");
    out.complement = {w1, w2, Form::d_coord(out.chart, un), Form::d_coord(out.chart, vn)};
    out.comp_labels = {pc.comp_labels[0], pc.comp_labels[1], un, vn};
    return out;
}

PfaffianChart prolonged_model_chart(PdeClass cls, const std::string& fiber_chart_id) {
    if (fiber_chart_id == "I") {
        PfaffianChart base = model_surface_chart(cls);
        PfaffianChart out = prolong_rank4(base, cls, 1);
        out.id = base.id + "-I";
        // canonical generator names: the two new forms cut the pi directions
        out.gen_labels[3] = "P" + base.comp_labels[2].substr(1);
        out.gen_labels[4] = "P" + base.comp_labels[3].substr(1);
        return out;
    }
    PfaffianChart pc;
    Expr u1 = ev("u1"), v1 = ev("v1");
    auto base_gens = [](const Chart& c, PdeClass cl) {
        auto dc = [&c](const char* n) { return Form::d_coord(c, n); };
        std::vector<Form> g;
        g.push_back(dc("z") - dc("x") * ev("p") - dc("y") * ev("q"));
        if (cl == PdeClass::Hyperbolic) {
            g.push_back(dc("p") - dc("x") * ev("r"));
            g.push_back(dc("q") - dc("y") * ev("t"));
        } else if (cl == PdeClass::Parabolic) {
            g.push_back(dc("p") - dc("y") * ev("s"));
            g.push_back(dc("q") - dc("x") * ev("s") - dc("y") * ev("t"));
        } else {
            g.push_back(dc("p") - dc("x") * ev("r") - dc("y") * ev("s"));
            g.push_back(dc("q") - dc("x") * ev("s") + dc("y") * ev("r"));
        }
        return g;
    };
    if (cls == PdeClass::Hyperbolic && fiber_chart_id == "III") {
        pc.id = "model-hyperbolic-III";
        pc.chart = Chart({"x", "y", "z", "p", "q", "r", "t", "u1", "v1"});
        auto dc = [&pc](const char* n) { return Form::d_coord(pc.chart, n); };
        pc.generators = base_gens(pc.chart, cls);
        pc.generators.push_back(dc("y") - dc("t") * u1);
        pc.generators.push_back(dc("r") - dc("x") * v1);
        pc.gen_labels = {"c0", "c1", "c2", "W2", "P11"};
        pc.complement = {dc("x"), dc("t"), dc("u1"), dc("v1")};
        pc.comp_labels = {"w1", "p22", "u1", "v1"};
        return pc;
    }
    if (cls == PdeClass::Hyperbolic && fiber_chart_id == "VI") {
        pc.id = "model-hyperbolic-VI";
        pc.chart = Chart({"x", "y", "z", "p", "q", "r", "t", "u1", "v1"});
        auto dc = [&pc](const char* n) { return Form::d_coord(pc.chart, n); };
        pc.generators = base_gens(pc.chart, cls);
        pc.generators.push_back(dc("x") - dc("r") * u1);
        pc.generators.push_back(dc("y") - dc("t") * v1);
        pc.gen_labels = {"c0", "c1", "c2", "W1", "W2"};
        pc.complement = {dc("r"), dc("t"), dc("u1"), dc("v1")};
        pc.comp_labels = {"p11", "p22", "u1", "v1"};
        return pc;
    }
    if (cls == PdeClass::Parabolic && fiber_chart_id == "VI") {
        pc.id = "model-parabolic-VI";
        pc.chart = Chart({"x", "y", "z", "p", "q", "s", "t", "u1", "v1"});
        auto dc = [&pc](const char* n) { return Form::d_coord(pc.chart, n); };
        pc.generators = base_gens(pc.chart, cls);
        pc.generators.push_back(dc("x") - dc("s") * u1 - dc("t") * v1);
        pc.generators.push_back(dc("y") - dc("s") * v1);
        pc.gen_labels = {"c0", "c1", "c2", "W1", "W2"};
        pc.complement = {dc("s"), dc("t"), dc("u1"), dc("v1")};
        pc.comp_labels = {"p12", "p22", "u1", "v1"};
        return pc;
    }
    if (cls == PdeClass::Elliptic && fiber_chart_id == "VI") {
        pc.id = "model-elliptic-VI";
        pc.chart = Chart({"x", "y", "z", "p", "q", "r", "s", "u1", "v1"});
        auto dc = [&pc](const char* n) { return Form::d_coord(pc.chart, n); };
        pc.generators = base_gens(pc.chart, cls);
        pc.generators.push_back(dc("x") - dc("r") * u1 - dc("s") * v1);
        pc.generators.push_back(dc("y") - dc("r") * v1 + dc("s") * u1);
        pc.gen_labels = {"c0", "c1", "c2", "W1", "W2"};
        pc.complement = {dc("r"), dc("s"), dc("u1"), dc("v1")};
        pc.comp_labels = {"p11", "p12", "u1", "v1"};
        return pc;
    }
    throw std::invalid_argument("no prolonged chart '" + fiber_chart_id + "' for " +
                                pde_class_name(cls));
}

Stratum prolonged_chart_stratum(PdeClass cls, const std::string& fiber_chart_id, double u,
                                double v, double tol) {
    const bool uz = std::abs(u) <= tol, vz = std::abs(v) <= tol;
    if (fiber_chart_id == "I") return Stratum::S0;
    if (cls == PdeClass::Hyperbolic && fiber_chart_id == "III")
        return uz ? Stratum::S1 : Stratum::S0;
    if (cls == PdeClass::Hyperbolic && fiber_chart_id == "VI")
        return (uz && vz) ? Stratum::S2 : (uz || vz ? Stratum::S1 : Stratum::S0);
    if (cls == PdeClass::Parabolic && fiber_chart_id == "VI")
        return !vz ? Stratum::S0 : (!uz ? Stratum::S1 : Stratum::S2);
    if (cls == PdeClass::Elliptic && fiber_chart_id == "VI")
        return (uz && vz) ? Stratum::S2 : Stratum::S0;
    throw std::invalid_argument("unknown chart id");
}

std::vector<std::string> sigma_j2_chart_names() { return {"xy", "xt", "yr", "rs", "rt", "st"}; }

PfaffianChart sigma_j2_chart(const std::string& which) {
    PfaffianChart pc;
    pc.id = "sigma-" + which;
    std::vector<std::string> base{"x", "y", "z", "p", "q", "r", "s", "t"};
    auto finish_base = [&pc](const std::vector<std::string>& fiber) {
        std::vector<std::string> coords{"x", "y", "z", "p", "q", "r", "s", "t"};
        for (const auto& f : fiber) coords.push_back(f);
        pc.chart = Chart(coords);
    };
    auto dc = [&pc](const char* n) { return Form::d_coord(pc.chart, n); };

    if (which == "xy") {
        finish_base({"P111", "P112", "P122", "P222"});
        pc.generators = {dc("z") - dc("x") * ev("p") - dc("y") * ev("q"),
                         dc("p") - dc("x") * ev("r") - dc("y") * ev("s"),
                         dc("q") - dc("x") * ev("s") - dc("y") * ev("t"),
                         dc("r") - dc("x") * ev("P111") - dc("y") * ev("P112"),
                         dc("s") - dc("x") * ev("P112") - dc("y") * ev("P122"),
                         dc("t") - dc("x") * ev("P122") - dc("y") * ev("P222")};
        pc.gen_labels = {"c0", "c1", "c2", "wr", "ws", "wt"};
        pc.complement = {dc("x"),    dc("y"),    dc("P111"),
                         dc("P112"), dc("P122"), dc("P222")};
        pc.comp_labels = {"x", "y", "P111", "P112", "P122", "P222"};
        return pc;
    }
    auto contact = [&]() {
        std::vector<Form> g;
        g.push_back(dc("z") - dc("x") * ev("p") - dc("y") * ev("q"));
        g.push_back(dc("p") - dc("x") * ev("r") - dc("y") * ev("s"));
        g.push_back(dc("q") - dc("x") * ev("s") - dc("y") * ev("t"));
        return g;
    };
    if (which == "xt") {
        finish_base({"a", "b", "c", "e"});
        pc.generators = contact();
        pc.generators.push_back(dc("y") - dc("x") * ev("a") - dc("t") * ev("b"));
        pc.generators.push_back(dc("r") - dc("x") * ev("c") -
                                dc("t") * (ev("a") * ev("a") + ev("e") * ev("b")));
        pc.generators.push_back(dc("s") - dc("x") * ev("e") + dc("t") * ev("a"));
        pc.gen_labels = {"c0", "c1", "c2", "wy", "wr", "ws"};
        pc.complement = {dc("x"), dc("t"), dc("a"), dc("b"), dc("c"), dc("e")};
        pc.comp_labels = {"x", "t", "a", "b", "c", "e"};
        return pc;
    }
    if (which == "yr") {
        finish_base({"a", "b", "c", "e"});
        pc.generators = contact();
        pc.generators.push_back(dc("x") - dc("y") * ev("a") - dc("r") * ev("b"));
        pc.generators.push_back(dc("s") - dc("y") * ev("c") + dc("r") * ev("a"));
        pc.generators.push_back(dc("t") - dc("y") * ev("e") -
                                dc("r") * (ev("a") * ev("a") + ev("b") * ev("c")));
        pc.gen_labels = {"c0", "c1", "c2", "wx", "ws", "wt"};
        pc.complement = {dc("y"), dc("r"), dc("a"), dc("b"), dc("c"), dc("e")};
        pc.comp_labels = {"y", "r", "a", "b", "c", "e"};
        return pc;
    }
    if (which == "rs") {
        finish_base({"b", "d", "e", "f"});
        pc.generators = contact();
        pc.generators.push_back(dc("x") - dc("r") * (ev("d") * ev("e") - ev("b") * ev("f")) -
                                dc("s") * ev("b"));
        pc.generators.push_back(dc("y") - dc("r") * ev("b") - dc("s") * ev("d"));
        pc.generators.push_back(dc("t") - dc("r") * ev("e") - dc("s") * ev("f"));
        pc.gen_labels = {"c0", "c1", "c2", "wx", "wy", "wt"};
        pc.complement = {dc("r"), dc("s"), dc("b"), dc("d"), dc("e"), dc("f")};
        pc.comp_labels = {"r", "s", "b", "d", "e", "f"};
        return pc;
    }
    if (which == "rt") {
        finish_base({"a", "d", "e", "f"});
        Expr den = K(1) - ev("e") * ev("f");
        pc.generators = contact();
        pc.generators.push_back(
            dc("x") - dc("r") * ev("a") +
            dc("t") * ((ev("d") * ev("e") + ev("a") * ev("f") * ev("f")) / den));
        pc.generators.push_back(
            dc("y") + dc("r") * ((ev("a") * ev("f") + ev("d") * ev("e") * ev("e")) / den) -
            dc("t") * ev("d"));
        pc.generators.push_back(dc("s") - dc("r") * ev("e") - dc("t") * ev("f"));
        pc.gen_labels = {"c0", "c1", "c2", "wx", "wy", "ws"};
        pc.complement = {dc("r"), dc("t"), dc("a"), dc("d"), dc("e"), dc("f")};
        pc.comp_labels = {"r", "t", "a", "d", "e", "f"};
        return pc;
    }
    if (which == "st") {
        finish_base({"a", "b", "e", "f"});
        pc.generators = contact();
        pc.generators.push_back(dc("x") - dc("s") * ev("a") - dc("t") * ev("b"));
        pc.generators.push_back(dc("y") - dc("s") * ev("b") +
                                dc("t") * (ev("b") * ev("e") - ev("a") * ev("f")));
        pc.generators.push_back(dc("r") - dc("s") * ev("e") - dc("t") * ev("f"));
        pc.gen_labels = {"c0", "c1", "c2", "wx", "wy", "wr"};
        pc.complement = {dc("s"), dc("t"), dc("a"), dc("b"), dc("e"), dc("f")};
        pc.comp_labels = {"s", "t", "a", "b", "e", "f"};
        return pc;
    }
    throw std::invalid_argument("unknown chart '" + which + "'");
}

std::vector<std::string> embedded_model_chart_names(PdeClass cls) {
    switch (cls) {
        case PdeClass::Hyperbolic: return {"xy", "xt", "rt"};
        case PdeClass::Parabolic: return {"xy", "st"};
        case PdeClass::Elliptic: return {"xy", "rs"};
        default: throw std::invalid_argument("no embedded charts for this class");
    }
}

std::string embedded_model_parent(PdeClass cls, const std::string& which) {
    (void)cls;
    return which;
}

PfaffianChart embedded_model_chart(PdeClass cls, const std::string& which) {
    PfaffianChart pc;
    auto dc = [&pc](const char* n) { return Form::d_coord(pc.chart, n); };
    auto contact_of = [&](PdeClass cl) {
        std::vector<Form> g;
        g.push_back(dc("z") - dc("x") * ev("p") - dc("y") * ev("q"));
        if (cl == PdeClass::Hyperbolic) {
            g.push_back(dc("p") - dc("x") * ev("r"));
            g.push_back(dc("q") - dc("y") * ev("t"));
        } else if (cl == PdeClass::Parabolic) {
            g.push_back(dc("p") - dc("y") * ev("s"));
            g.push_back(dc("q") - dc("x") * ev("s") - dc("y") * ev("t"));
        } else {
            g.push_back(dc("p") - dc("x") * ev("r") - dc("y") * ev("s"));
            g.push_back(dc("q") - dc("x") * ev("s") + dc("y") * ev("r"));
        }
        return g;
    };

    if (cls == PdeClass::Hyperbolic && which == "xy") {
        pc.id = "wave-xy";
        pc.chart = Chart({"x", "y", "z", "p", "q", "r", "t", "P111", "P222"});
        pc.generators = contact_of(cls);
        pc.generators.push_back(dc("r") - dc("x") * ev("P111"));
        pc.generators.push_back(dc("t") - dc("y") * ev("P222"));
        pc.gen_labels = {"c0", "c1", "c2", "wr", "wt"};
        pc.complement = {dc("x"), dc("y"), dc("P111"), dc("P222")};
        pc.comp_labels = {"x", "y", "P111", "P222"};
        return pc;
    }
    if (cls == PdeClass::Hyperbolic && which == "xt") {
        pc.id = "wave-xt";
        pc.chart = Chart({"x", "y", "z", "p", "q", "r", "t", "b", "c"});
        pc.generators = contact_of(cls);
        pc.generators.push_back(dc("y") - dc("t") * ev("b"));
        pc.generators.push_back(dc("r") - dc("x") * ev("c"));
        pc.gen_labels = {"c0", "c1", "c2", "wy", "wr"};
        pc.complement = {dc("x"), dc("t"), dc("b"), dc("c")};
        pc.comp_labels = {"x", "t", "b", "c"};
        return pc;
    }
    if (cls == PdeClass::Hyperbolic && which == "rt") {
        pc.id = "wave-rt";
        pc.chart = Chart({"x", "y", "z", "p", "q", "r", "t", "a", "d"});
        pc.generators = contact_of(cls);
        pc.generators.push_back(dc("x") - dc("r") * ev("a"));
        pc.generators.push_back(dc("y") - dc("t") * ev("d"));
        pc.gen_labels = {"c0", "c1", "c2", "wx", "wy"};
        pc.complement = {dc("r"), dc("t"), dc("a"), dc("d")};
        pc.comp_labels = {"r", "t", "a", "d"};
        return pc;
    }
    if (cls == PdeClass::Parabolic && which == "xy") {
        pc.id = "parabolic-xy";
        pc.chart = Chart({"x", "y", "z", "p", "q", "s", "t", "P122", "P222"});
        pc.generators = contact_of(cls);
        pc.generators.push_back(dc("s") - dc("y") * ev("P122"));
        pc.generators.push_back(dc("t") - dc("x") * ev("P122") - dc("y") * ev("P222"));
        pc.gen_labels = {"c0", "c1", "c2", "ws", "wt"};
        pc.complement = {dc("x"), dc("y"), dc("P122"), dc("P222")};
        pc.comp_labels = {"x", "y", "P122", "P222"};
        return pc;
    }
    if (cls == PdeClass::Parabolic && which == "st") {
        pc.id = "parabolic-st";
        pc.chart = Chart({"x", "y", "z", "p", "q", "s", "t", "a", "b"});
        pc.generators = contact_of(cls);
        pc.generators.push_back(dc("x") - dc("s") * ev("a") - dc("t") * ev("b"));
        pc.generators.push_back(dc("y") - dc("s") * ev("b"));
        pc.gen_labels = {"c0", "c1", "c2", "wx", "wy"};
        pc.complement = {dc("s"), dc("t"), dc("a"), dc("b")};
        pc.comp_labels = {"s", "t", "a", "b"};
        return pc;
    }
    if (cls == PdeClass::Elliptic && which == "xy") {
        pc.id = "laplace-xy";
        pc.chart = Chart({"x", "y", "z", "p", "q", "r", "s", "P111", "P112"});
        pc.generators = contact_of(cls);
        pc.generators.push_back(dc("r") - dc("x") * ev("P111") - dc("y") * ev("P112"));
        pc.generators.push_back(dc("s") - dc("x") * ev("P112") + dc("y") * ev("P111"));
        pc.gen_labels = {"c0", "c1", "c2", "wr", "ws"};
        pc.complement = {dc("x"), dc("y"), dc("P111"), dc("P112")};
        pc.comp_labels = {"x", "y", "P111", "P112"};
        return pc;
    }
    if (cls == PdeClass::Elliptic && which == "rs") {
        pc.id = "laplace-rs";
        pc.chart = Chart({"x", "y", "z", "p", "q", "r", "s", "b", "d"});
        pc.generators = contact_of(cls);
        pc.generators.push_back(dc("x") + dc("r") * ev("d") - dc("s") * ev("b"));
        pc.generators.push_back(dc("y") - dc("r") * ev("b") - dc("s") * ev("d"));
        pc.gen_labels = {"c0", "c1", "c2", "wx", "wy"};
        pc.complement = {dc("r"), dc("s"), dc("b"), dc("d")};
        pc.comp_labels = {"r", "s", "b", "d"};
        return pc;
    }
    throw std::invalid_argument("no embedded chart '" + which + "' for " + pde_class_name(cls));
}

std::vector<Expr> embedded_model_images(PdeClass cls, const std::string& which) {
    // images of the 12 parent coordinates over the 9-dim embedded chart
    PfaffianChart parent = sigma_j2_chart(which);
    std::map<std::string, Expr> img;
    for (const char* n : {"x", "y", "z", "p", "q", "r", "s", "t"}) img[n] = ev(n);
    auto zero = K(0);
    if (cls == PdeClass::Hyperbolic && which == "xy") {
        img["s"] = zero;
        img["P111"] = ev("P111");
        img["P112"] = zero;
        img["P122"] = zero;
        img["P222"] = ev("P222");
    } else if (cls == PdeClass::Hyperbolic && which == "xt") {
        img["s"] = zero;
        img["a"] = zero;
        img["b"] = ev("b");
        img["c"] = ev("c");
        img["e"] = zero;
    } else if (cls == PdeClass::Hyperbolic && which == "rt") {
        img["s"] = zero;
        img["a"] = ev("a");
        img["d"] = ev("d");
        img["e"] = zero;
        img["f"] = zero;
    } else if (cls == PdeClass::Parabolic && which == "xy") {
        img["r"] = zero;
        img["P111"] = zero;
        img["P112"] = zero;
        img["P122"] = ev("P122");
        img["P222"] = ev("P222");
    } else if (cls == PdeClass::Parabolic && which == "st") {
        img["r"] = zero;
        img["a"] = ev("a");
        img["b"] = ev("b");
        img["e"] = zero;
        img["f"] = zero;
    } else if (cls == PdeClass::Elliptic && which == "xy") {
        img["t"] = -ev("r");
        img["P111"] = ev("P111");
        img["P112"] = ev("P112");
        img["P122"] = -ev("P111");
        img["P222"] = -ev("P112");
    } else if (cls == PdeClass::Elliptic && which == "rs") {
        img["t"] = -ev("r");
        img["b"] = ev("b");
        img["d"] = ev("d");
        img["e"] = -K(1);
        img["f"] = zero;
    } else {
        throw std::invalid_argument("no embedding for this chart");
    }
    std::vector<Expr> out;
    for (int i = 0; i < parent.dim(); ++i) out.push_back(img.at(parent.chart.coord(i)));
    return out;
}

Stratum embedded_stratum(PdeClass cls, const std::string& which, const Env& pt, double tol) {
    PfaffianChart pc = embedded_model_chart(cls, which);
    Eigen::VectorXd x(pc.dim());
    for (int i = 0; i < pc.dim(); ++i) x(i) = pt.at(pc.chart.coord(i));
    return base_transversality_stratum(pc, x, tol);
}

} // namespace eds
