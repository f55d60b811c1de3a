#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eds/expr.hpp"

#include <cmath>
#include <random>

using namespace eds;

namespace {

const Chart& j2() {
    static Chart c({"x", "y", "z", "p", "q", "r", "s", "t"});
    return c;
}

double fd_central(const Expr& e, const Env& env, const std::string& v, double h = 1e-5) {
    Env lo = env, hi = env;
    lo[v] -= h;
    hi[v] += h;
    return (e.eval(hi) - e.eval(lo)) / (2 * h);
}

Env random_env(const Chart& c, std::mt19937_64& rng) {
    Env env;
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const auto& name : c.coords()) env[name] = u(rng);
    return env;
}

} // namespace

TEST_CASE("parse builds the expected tree shapes") {
    Expr e = parse_expr("r*t - s^2", j2());
    CHECK(e.kind() == Expr::Kind::Sum);
    REQUIRE(e.kids().size() == 2);
    CHECK(e.kids()[0].kind() == Expr::Kind::Prod);
    auto vars = e.free_vars();
    REQUIRE(vars.size() == 3);
    CHECK(vars[0] == "r");
    CHECK(vars[1] == "t");
    CHECK(vars[2] == "s");
}

TEST_CASE("unknown identifiers are reported with their name") {
    CHECK_THROWS_WITH_AS(parse_expr("dz_bad", j2()), doctest::Contains("dz_bad"), ParseError);
    CHECK_THROWS_AS(parse_expr("r + ", j2()), ParseError);
    CHECK_THROWS_AS(parse_expr("r ** t", j2()), ParseError);
    CHECK_THROWS_AS(parse_expr("s^1.5", j2()), ParseError);
    try {
        parse_expr("r + (t", j2());
        CHECK(false);
    } catch (const ParseError& pe) {
        CHECK(pe.position == 6);
    }
}

TEST_CASE("evaluation matches arithmetic") {
    Env env{{"r", 1}, {"t", 2}, {"s", 0}};
    CHECK(parse_expr("r + t", j2()).eval(env) == doctest::Approx(3.0));
    CHECK(parse_expr("r*t - s^2", j2()).eval(Env{{"r", 1}, {"t", 1}, {"s", 0}}) ==
          doctest::Approx(1.0));
    CHECK_THROWS_AS(parse_expr("1/s", j2()).eval(Env{{"s", 0.0}}), DomainError);
    CHECK_THROWS_AS(parse_expr("log(s)", j2()).eval(Env{{"s", -1.0}}), DomainError);
    CHECK_THROWS_AS(parse_expr("sqrt(s)", j2()).eval(Env{{"s", -1.0}}), DomainError);
}

TEST_CASE("evaluation is bitwise deterministic") {
    Expr e = parse_expr("sin(x)*exp(y) + r^3/(1 + t^2)", j2());
    Env env{{"x", 0.3}, {"y", -1.2}, {"r", 0.77}, {"t", 2.5}};
    double a = e.eval(env);
    double b = e.eval(env);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}

TEST_CASE("exact rational evaluation:  wave discriminant is -1/4") {
    // Delta = F_r F_t - F_s^2 / 4 for F = s
    Expr F = parse_expr("s", j2());
    Expr delta = F.diff("r") * F.diff("t") -
                 Expr::pow(F.diff("s"), 2) * Expr::constant(Rational(1, 4));
    ExactEnv env;
    for (const auto& c : j2().coords()) env[c] = Rational(0);
    CHECK(delta.eval_exact(env) == Rational(-1, 4));
    CHECK_THROWS_AS(parse_expr("sin(s)", j2()).eval_exact(env), EvalError);
}

TEST_CASE("diff: basic rules and printed forms") {
    CHECK(parse_expr("s", j2()).diff("s").str() == "1");
    CHECK(parse_expr("r*t - s^2", j2()).diff("s").str() == "-2*s");
    CHECK(parse_expr("r*t - s^2", j2()).diff("r").str() == "t");
    CHECK(parse_expr("5", j2()).diff("r").is_zero_const());
}

TEST_CASE("diff agrees with central finite differences") {
    const char* exprs[] = {
        "r*t - s^2",
        "sin(x)*cos(y) + exp(p/(2 + q^2))",
        "sqrt(4 + r^2)*log(10 + t)",
        "(x + y)^3/(5 + z^2)",
        "x^4 - 3*x*y*z + y^2/(1 + q^2)",
    };
    std::mt19937_64 rng(42);
    for (const char* s : exprs) {
        Expr e = parse_expr(s, j2());
        for (const auto& v : e.free_vars()) {
            Expr de = e.diff(v);
            for (int i = 0; i < 10; ++i) {
                Env env = random_env(j2(), rng);
                double exact = de.eval(env);
                double fd = fd_central(e, env, v);
                double scale = std::max({1.0, std::abs(exact), std::abs(fd)});
                CHECK(std::abs(exact - fd) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("diff is linear and satisfies the product rule") {
    Expr e1 = parse_expr("x^3*y - q*z^2", j2());
    Expr e2 = parse_expr("p*x + y^2*q", j2());
    Expr a = Expr::constant(Rational(7, 3));
    Expr lin_lhs = (a * e1 + e2).diff("x");
    Expr lin_rhs = a * e1.diff("x") + e2.diff("x");
    Expr prod_lhs = (e1 * e2).diff("y");
    Expr prod_rhs = e1.diff("y") * e2 + e1 * e2.diff("y");
    std::mt19937_64 rng(7);
    for (int i = 0; i < 100; ++i) {
        Env env = random_env(j2(), rng);
        double l1 = lin_lhs.eval(env), r1 = lin_rhs.eval(env);
        CHECK(std::abs(l1 - r1) <= 1e-12 * std::max(1.0, std::abs(l1)));
        double l2 = prod_lhs.eval(env), r2 = prod_rhs.eval(env);
        CHECK(std::abs(l2 - r2) <= 1e-12 * std::max(1.0, std::abs(l2)));
    }
}

TEST_CASE("print/parse round trip is structural identity") {
    const char* exprs[] = {
        "r*t - s^2",
        "-x + 3/4",
        "x*(y/z)",
        "x/y/z",
        "(x + y)^3",
        "sin(cos(x)) - sqrt(1 + q^2)",
        "x^-2 + 2.5*y",
        "1/(r + t)",
        "-2*s",
        "p*q*r*s*t",
        "x - (y - z)",
    };
    for (const char* s : exprs) {
        Expr e = parse_expr(s, j2());
        Expr e2 = parse_expr(e.str(), j2());
        INFO(s, " printed as ", e.str());
        CHECK(e.same_tree(e2));
    }
}

TEST_CASE("substitute composes") {
    Expr e = parse_expr("r*t - s^2", j2());
    std::map<std::string, Expr> m{{"s", Expr::constant(0)}, {"r", parse_expr("x^2", j2())}};
    Expr g = e.substitute(m);
    CHECK(g.str() == "x^2*t");
}

TEST_CASE("probabilistic zero test") {
    Expr zero = parse_expr("(x + y)^2 - x^2 - 2*x*y - y^2", j2());
    CHECK(is_zero_probabilistic(zero, j2()));
    Expr notzero = parse_expr("x^2 - y", j2());
    CHECK(!is_zero_probabilistic(notzero, j2()));
    // domain-restricted but identically zero on its domain
    Expr zlog = parse_expr("log(x^2) - 2*log(sqrt(x^2))", j2());
    CHECK(is_zero_probabilistic(zlog, j2()));
}

TEST_CASE("polynomial coefficients and exact antiderivative") {
    Chart c1({"t"});
    Expr y = parse_expr("t^2", c1);
    Expr Y = integrate_poly(y, "t");
    CHECK(Y.str() == "1/3*t^3");
    Expr Y2 = integrate_poly(y * y, "t");
    ExactEnv env{{"t", Rational(2)}};
    CHECK(Y2.eval_exact(env) == Rational(32, 5));
    CHECK_THROWS_AS(poly_coeffs(parse_expr("sin(t)", c1), "t"), EvalError);

    Chart c2({"r", "s"});
    Expr f = parse_expr("r^2*s + s^3", c2);
    auto coeffs = poly_coeffs(f, "r");
    REQUIRE(coeffs.size() == 3);
    CHECK(coeffs[1].is_zero_const());
    Expr F = integrate_poly(f, "r");
    ExactEnv env2{{"r", Rational(3)}, {"s", Rational(1)}};
    CHECK(F.eval_exact(env2) == Rational(12)); // r^3 s/3 + s^3 r at (3,1)
}
