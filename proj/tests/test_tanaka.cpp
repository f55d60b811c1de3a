#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "eds/tanaka.hpp"

#include <random>

using namespace eds;

namespace {

const PdeClass kClasses[3] = {PdeClass::Hyperbolic, PdeClass::Parabolic, PdeClass::Elliptic};

Eigen::VectorXd random_point(const PfaffianChart& pc, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    Eigen::VectorXd x(pc.dim());
    for (int i = 0; i < pc.dim(); ++i) x(i) = u(rng);
    return x;
}

void pin_fiber(const PfaffianChart& pc, Eigen::VectorXd& x, double u, double v) {
    x(pc.chart.index_of("u1")) = u;
    x(pc.chart.index_of("v1")) = v;
}

// rows of A and B span the same space
bool same_row_space(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (rank_svd(A) != rank_svd(B)) return false;
    Eigen::MatrixXd stacked(A.rows() + B.rows(), A.cols());
    stacked.topRows(A.rows()) = A;
    stacked.bottomRows(B.rows()) = B;
    return rank_svd(stacked) == rank_svd(A);
}

Eigen::MatrixXd gen_rows(const PfaffianChart& pc, const Eigen::VectorXd& x, int from, int count) {
    Env env = env_of(pc.chart, x);
    Eigen::MatrixXd M(count, pc.dim());
    for (int i = 0; i < count; ++i) M.row(i) = pc.generators[from + i].eval(env).as_covector();
    return M;
}

} // namespace

TEST_CASE("exterior derivative agrees with finite differencing of coefficients") {
    std::mt19937_64 rng(8101);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Chart c = j2_chart();
    std::uniform_int_distribution<int> pick(0, c.dim() - 1);
    for (int trial = 0; trial < 5; ++trial) {
        Form w = Form::zero(c, 1);
        for (int i = 0; i < c.dim(); ++i) {
            Expr coeff = Expr::constant(Rational(pick(rng) - 3)) +
                         Expr::var(c.coord(pick(rng))) * Expr::var(c.coord(pick(rng)));
            w = w + Form::d_coord(c, c.coord(i)) * coeff;
        }
        Eigen::VectorXd x(c.dim()), X(c.dim()), Y(c.dim());
        for (int i = 0; i < c.dim(); ++i) {
            x(i) = u(rng);
            X(i) = u(rng);
            Y(i) = u(rng);
        }
        auto pair_with = [&](const Eigen::VectorXd& at, const Eigen::VectorXd& vec) {
            return w.eval(env_of(c, at)).apply({vec});
        };
        const double h = 1e-5;
        const double dX_wY = (pair_with(x + h * X, Y) - pair_with(x - h * X, Y)) / (2 * h);
        const double dY_wX = (pair_with(x + h * Y, X) - pair_with(x - h * Y, X)) / (2 * h);
        const double exact = w.d().eval(env_of(c, x)).apply({X, Y});
        CHECK(std::abs(exact - (dX_wY - dY_wX)) < 1e-5);
    }
}

TEST_CASE("derived flags of the prolonged model charts by stratum") {
    std::mt19937_64 rng(8102);
    const std::vector<int> full{4, 6, 8, 9};
    const std::vector<int> stuck{4, 6, 8, 8};

    struct Case {
        PdeClass cls;
        const char* id;
        double u, v;
        bool pin;  // pin fiber coordinates to (u, v)
        std::vector<int> want;
    };
    const Case cases[] = {
        {PdeClass::Hyperbolic, "I", 0, 0, false, full},
        {PdeClass::Hyperbolic, "III", 0.0, 0.6, true, full},   // S1
        {PdeClass::Hyperbolic, "VI", 0.0, 0.0, true, stuck},   // S2
        {PdeClass::Hyperbolic, "VI", 0.5, -0.8, true, full},   // S0
        {PdeClass::Parabolic, "I", 0, 0, false, full},
        {PdeClass::Parabolic, "VI", 0.7, 0.0, true, full},     // S1
        {PdeClass::Parabolic, "VI", 0.0, 0.0, true, stuck},    // S2
        {PdeClass::Elliptic, "I", 0, 0, false, full},
        {PdeClass::Elliptic, "VI", 0.0, 0.0, true, stuck},     // S2
        {PdeClass::Elliptic, "VI", -0.4, 0.9, true, full},     // S0
    };
    for (const auto& cs : cases) {
        PfaffianChart pc = prolonged_model_chart(cs.cls, cs.id);
        INFO(pde_class_name(cs.cls), " chart ", cs.id, " at (", cs.u, ",", cs.v, ")");
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::VectorXd x = random_point(pc, rng);
            if (cs.pin) pin_fiber(pc, x, cs.u, cs.v);
            DerivedFlag growth = derived_flag(pc, x, true);
            CHECK(growth.dims == cs.want);
            CHECK(!growth.unstable);
            // the unrestricted derived iteration does not see the strata
            CHECK(derived_flag(pc, x, false).dims == full);
        }
    }
}

TEST_CASE("first and second derived systems are spanned by the contact forms") {
    std::mt19937_64 rng(8103);
    for (PdeClass cls : kClasses) {
        PfaffianChart pc = prolonged_model_chart(cls, "I");
        for (int trial = 0; trial < 3; ++trial) {
            Eigen::VectorXd x = random_point(pc, rng);
            DerivedFlag flag = derived_flag(pc, x, true);
            REQUIRE(flag.annihilators.size() >= 3);
            CHECK(same_row_space(flag.annihilators[1], gen_rows(pc, x, 0, 3)));
            CHECK(same_row_space(flag.annihilators[2], gen_rows(pc, x, 0, 1)));
        }
    }
}

TEST_CASE("derived flags on the 12-dim prolongation charts") {
    std::mt19937_64 rng(8104);
    const std::vector<int> want{6, 9, 11, 12};
    for (const auto& name : sigma_j2_chart_names()) {
        PfaffianChart pc = sigma_j2_chart(name);
        for (int trial = 0; trial < (name == "xy" ? 20 : 5); ++trial) {
            Eigen::VectorXd x = random_point(pc, rng);
            DerivedFlag flag = derived_flag(pc, x, true);
            INFO("chart ", name);
            CHECK(flag.dims == want);
            CHECK(derived_flag(pc, x, false).full());
            // first derived system = pullback of the underlying contact bundle
            CHECK(same_row_space(flag.annihilators[1], gen_rows(pc, x, 0, 3)));
            CHECK(same_row_space(flag.annihilators[2], gen_rows(pc, x, 0, 1)));
        }
    }
}

TEST_CASE("derived flags on the embedded model solution spaces by stratum") {
    std::mt19937_64 rng(8105);
    const std::vector<int> full{4, 6, 8, 9};
    const std::vector<int> stuck{4, 6, 8, 8};
    struct Case {
        PdeClass cls;
        const char* which;
        const char* f1;
        const char* f2;
        double a, b;
        std::vector<int> want;
    };
    const Case cases[] = {
        {PdeClass::Hyperbolic, "xt", "b", "c", 0.6, 0.4, full},
        {PdeClass::Hyperbolic, "xt", "b", "c", 0.0, 0.4, full},   // S1
        {PdeClass::Hyperbolic, "rt", "a", "d", 0.5, -0.6, full},
        {PdeClass::Hyperbolic, "rt", "a", "d", 0.0, 0.0, stuck},  // S2
        {PdeClass::Parabolic, "st", "a", "b", 0.3, 0.8, full},
        {PdeClass::Parabolic, "st", "a", "b", 0.5, 0.0, full},    // S1
        {PdeClass::Parabolic, "st", "a", "b", 0.0, 0.0, stuck},   // S2
        {PdeClass::Elliptic, "rs", "b", "d", 0.4, 0.1, full},
        {PdeClass::Elliptic, "rs", "b", "d", 0.0, 0.0, stuck},    // S2
    };
    for (const auto& cs : cases) {
        PfaffianChart pc = embedded_model_chart(cs.cls, cs.which);
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::VectorXd x = random_point(pc, rng);
            x(pc.chart.index_of(cs.f1)) = cs.a;
            x(pc.chart.index_of(cs.f2)) = cs.b;
            INFO(pde_class_name(cs.cls), " ", cs.which, " fiber (", cs.a, ",", cs.b, ")");
            CHECK(derived_flag(pc, x, true).dims == cs.want);
        }
    }
}

TEST_CASE("symbol algebras match the reference tables layer by layer") {
    for (PdeClass cls : kClasses) {
        for (int m : reference_layers(cls)) {
            RefSymbol ref = reference_symbol(cls, m);
            PfaffianChart pc = prolonged_model_chart(cls, ref.chart_id);
            Eigen::VectorXd x = Eigen::VectorXd::Zero(pc.dim());
            std::mt19937_64 rng(8106 + m);
            x = random_point(pc, rng);
            pin_fiber(pc, x, ref.u, ref.v);
            SymbolAlgebra s = symbol_algebra(pc, x, canonical_levels(pc));
            SymbolComparison cmp = compare_symbol(s, ref);
            INFO(pde_class_name(cls), " layer ", m);
            CHECK(cmp.support_match);
            CHECK(cmp.reference_match);
            CHECK(cmp.graded_dims == std::vector<int>{4, 2, 2, 1});
            CHECK(cmp.image_dims[0] == 2);
            CHECK(cmp.image_dims[1] == 2);
            CHECK(cmp.image_dims[2] == (m == 2 ? 0 : 1));
            CHECK(cmp.generating[0]);
            CHECK(cmp.generating[1]);
            CHECK(cmp.generating[2] == (m != 2));
            CHECK(cmp.pairing_rank == (m == 0 ? 2 : (m == 1 ? 1 : 0)));
            CHECK(cmp.jacobi < 1e-9);
            // the only non-unit constant is the scaled transversal bracket on
            // the middle parabolic layer
            CHECK(cmp.unit_scale == !(cls == PdeClass::Parabolic && m == 1));
        }
    }
}

TEST_CASE("symbol constants are position independent over a stratum") {
    std::mt19937_64 rng(8107);
    for (PdeClass cls : kClasses) {
        RefSymbol ref = reference_symbol(cls, 0);
        PfaffianChart pc = prolonged_model_chart(cls, ref.chart_id);
        for (int trial = 0; trial < 5; ++trial) {
            Eigen::VectorXd x = random_point(pc, rng);
            SymbolAlgebra s = symbol_algebra(pc, x, canonical_levels(pc));
            CHECK(compare_symbol(s, ref).reference_match);
        }
    }
}

TEST_CASE("near-threshold rank decisions raise the instability flag") {
    Chart c = j2_chart();
    PfaffianChart pc;
    pc.id = "shrunk";
    pc.chart = c;
    Form tiny = (Form::d_coord(c, "p") - Form::d_coord(c, "x") * Expr::var("r")) *
                Expr::constant(Rational(1, 200000000));
    pc.generators = {Form::d_coord(c, "z") - Form::d_coord(c, "x") * Expr::var("p") -
                         Form::d_coord(c, "y") * Expr::var("q"),
                     tiny};
    pc.gen_labels = {"c0", "c1"};
    for (const char* n : {"x", "y", "r", "s", "t", "q"})
        pc.complement.push_back(Form::d_coord(c, n));
    pc.comp_labels = {"x", "y", "r", "s", "t", "q"};
    Eigen::VectorXd x = Eigen::VectorXd::Constant(8, 0.3);
    DerivedFlag flag = derived_flag(pc, x, true);
    CHECK(flag.unstable);
}
