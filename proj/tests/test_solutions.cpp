#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eds/solutions.hpp"

#include <cmath>

using namespace eds;

namespace {

Expr tpow(const char* v, int k) { return Expr::pow(Expr::var(v), k); }

} // namespace

TEST_CASE("curves expose consistent structural calculus") {
    Curve c = Curve::polynomial(tpow("t", 3) - Expr::constant(2) * Expr::var("t"), "t");
    CHECK(std::abs(c.value(0.5) - (0.125 - 1.0)) < 1e-12);
    CHECK(std::abs(c.d1(0.5) - (0.75 - 2.0)) < 1e-12);
    CHECK(std::abs(c.d2(0.5) - 3.0) < 1e-12);
    CHECK(std::abs(c.antiderivative(2.0) - 0.0) < 1e-12); // t^4/4 - t^2 at 2

    std::vector<double> xs, ys;
    for (int i = 0; i <= 20; ++i) {
        const double t = -1 + 0.1 * i;
        xs.push_back(t);
        ys.push_back(std::sin(1.7 * t) + 0.3 * t);
    }
    Curve s = Curve::tabulated(xs, ys);
    for (size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(s.value(xs[i]) - ys[i]) < 1e-12);
    CHECK(std::abs(s.antiderivative(s.base())) < 1e-14);
    for (double t : {-0.93, -0.41, 0.07, 0.66, 0.98}) {
        const double h = 1e-5;
        CHECK(std::abs((s.value(t + h) - s.value(t - h)) / (2 * h) - s.d1(t)) < 1e-6);
        CHECK(std::abs((s.d1(t + h) - s.d1(t - h)) / (2 * h) - s.d2(t)) < 1e-6);
        CHECK(std::abs((s.antiderivative(t + h) - s.antiderivative(t - h)) / (2 * h) -
                       s.value(t)) < 1e-8);
    }
}

TEST_CASE("product antiderivatives agree across representations") {
    Curve pl = Curve::polynomial(Expr::var("t"), "t");
    CHECK(std::abs(antiderivative_of_product(pl, pl, 0.9) - 0.243) < 1e-13);

    std::vector<double> xs, ys;
    for (int i = 0; i <= 10; ++i) {
        xs.push_back(-1 + 0.2 * i);
        ys.push_back(xs.back());
    }
    Curve sp = Curve::tabulated(xs, ys); // linear data: the spline is exact
    CHECK(std::abs(antiderivative_of_product(sp, sp, 0.9) - 0.243) < 1e-10);
    CHECK(std::abs(antiderivative_of_product(pl, sp, 0.9) - 0.243) < 1e-10);
}

TEST_CASE("wave surface in the xt chart reproduces the monomial worked example") {
    Curve y = Curve::polynomial(tpow("t", 2), "t");
    Curve z0 = Curve::polynomial(Expr::constant(0), "x");
    SolutionMap sol = wave_solution_xt(y, z0);
    for (double v : {-0.8, -0.3, 0.4, 1.0}) {
        CHECK(std::abs(sol.comp[4].f(0.2, v) - 2.0 / 3 * v * v * v) < 1e-12);       // q
        CHECK(std::abs(sol.comp[2].f(0.2, v) - 4.0 / 15 * std::pow(v, 5)) < 1e-12); // z
        CHECK(std::abs(sol.comp[7].f(0.2, v) - 2 * v) < 1e-12);                     // b
    }
    VerificationReport rep = verify_solution(sol);
    CHECK(rep.pass);
    CHECK(rep.max_residual < 1e-9);
    CHECK(rep.per_generator.size() == 5);

    CHECK(corank_at(sol, 0.3, 0.0) == 1);
    CHECK(corank_at(sol, 0.3, 0.5) == 0);
    auto sing = scan_singular(sol);
    CHECK(sing.size() == 61);
    for (const auto& sp : sing) {
        CHECK(std::abs(sp.v) < 1e-12);
        CHECK(sp.corank == 1);
    }
}

TEST_CASE("wave surface in the rt chart degenerates only where both profiles stall") {
    Curve x = Curve::polynomial(tpow("r", 2), "r");
    Curve y = Curve::polynomial(tpow("t", 2), "t");
    SolutionMap sol = wave_solution_rt(x, y);
    for (double u : {-0.6, 0.5})
        CHECK(std::abs(sol.comp[3].f(u, 0.1) - 2.0 / 3 * u * u * u) < 1e-12); // p
    CHECK(verify_solution(sol).pass);
    CHECK(corank_at(sol, 0.0, 0.0) == 2);
    CHECK(corank_at(sol, 0.5, 0.0) == 1);
    CHECK(corank_at(sol, 0.0, -0.4) == 1);
    CHECK(corank_at(sol, 0.5, -0.4) == 0);
}

TEST_CASE("parabolic surface matches its worked example") {
    Curve y = Curve::polynomial(tpow("s", 2), "s");
    Curve x0 = Curve::polynomial(Expr::constant(0), "s");
    SolutionMap sol = parabolic_solution_st(y, x0);
    for (double u : {-0.7, 0.4})
        for (double v : {-0.5, 0.8}) {
            CHECK(std::abs(sol.comp[0].f(u, v) - 2 * u * v) < 1e-12);                   // x
            CHECK(std::abs(sol.comp[7].f(u, v) - 2 * v) < 1e-12);                       // a
            CHECK(std::abs(sol.comp[8].f(u, v) - 2 * u) < 1e-12);                       // b
            CHECK(std::abs(sol.comp[3].f(u, v) - 2.0 / 3 * u * u * u) < 1e-12);         // p
            CHECK(std::abs(sol.comp[4].f(u, v) - 2 * u * u * v) < 1e-12);               // q
            CHECK(std::abs(sol.comp[2].f(u, v) - 4.0 / 3 * std::pow(u, 4) * v) < 1e-12); // z
        }
    CHECK(verify_solution(sol).pass);
    CHECK(corank_at(sol, 0.0, 0.7) == 1);
    CHECK(corank_at(sol, 0.0, 0.0) == 2);
    CHECK(corank_at(sol, 0.3, 0.0) == 0);
}

TEST_CASE("conjugate-pair surface for the elliptic model") {
    auto [y, x] = holomorphic_pair(
        {{Rational(0), Rational(0)}, {Rational(0), Rational(0)}, {Rational(1), Rational(0)}});
    SolutionMap sol = laplace_solution_rs(y, x); // y + i x = (r + i s)^2
    for (double u : {-0.5, 0.7})
        for (double v : {-0.8, 0.2}) {
            CHECK(std::abs(sol.comp[1].f(u, v) - (u * u - v * v)) < 1e-12);
            CHECK(std::abs(sol.comp[0].f(u, v) - 2 * u * v) < 1e-12);
            CHECK(std::abs(sol.comp[3].f(u, v) - (2 * u * u * v - 2.0 / 3 * v * v * v)) < 1e-12);
            CHECK(std::abs(sol.comp[4].f(u, v) - (2 * u * v * v - 2.0 / 3 * u * u * u)) < 1e-12);
        }
    CHECK(verify_solution(sol).pass);
    // the recovered gradient pair is itself conjugate
    for (double u : {-0.9, -0.2, 0.5})
        for (double v : {-0.4, 0.6}) {
            CHECK(std::abs(sol.comp[3].fu(u, v) - sol.comp[4].fv(u, v)) < 1e-10);
            CHECK(std::abs(sol.comp[3].fv(u, v) + sol.comp[4].fu(u, v)) < 1e-10);
        }
    CHECK(corank_at(sol, 0.0, 0.0) == 2);
    CHECK(corank_at(sol, 0.3, 0.1) == 0);
    auto sing = scan_singular(sol);
    REQUIRE(sing.size() == 1);
    CHECK(sing[0].corank == 2);
}

TEST_CASE("non-conjugate input pairs are rejected") {
    CHECK_THROWS_AS(laplace_solution_rs(tpow("r", 2), Expr::var("s")), ConstructionError);
}

TEST_CASE("a corrupted component drives the residual to the offset size") {
    Curve y = Curve::polynomial(tpow("t", 2), "t");
    Curve z0 = Curve::polynomial(tpow("x", 3), "x");
    SolutionMap sol = wave_solution_xt(y, z0);
    REQUIRE(verify_solution(sol).pass);
    auto qf = sol.comp[4].f;
    sol.comp[4].f = [qf](double u, double v) { return qf(u, v) + 0.01; };
    VerificationReport rep = verify_solution(sol);
    CHECK(!rep.pass);
    CHECK(rep.max_residual > 1e-3);
    CHECK(rep.max_residual < 1e-1);
}

TEST_CASE("tabulated profiles verify to tolerance") {
    std::vector<double> xs, ys, zs;
    for (int i = 0; i <= 16; ++i) {
        const double t = -1 + 0.125 * i;
        xs.push_back(t);
        ys.push_back(std::exp(0.4 * t) - 1);
        zs.push_back(std::cos(1.3 * t));
    }
    Curve yc = Curve::tabulated(xs, ys);
    Curve z0 = Curve::tabulated(xs, zs);
    CHECK(verify_solution(wave_solution_xt(yc, z0)).pass);

    Curve x0 = Curve::polynomial(Expr::var("s") - tpow("s", 3), "s");
    CHECK(verify_solution(parabolic_solution_st(yc, x0)).pass);
}
