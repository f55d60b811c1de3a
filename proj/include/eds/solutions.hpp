#pragma once

#include "eds/prolong.hpp"

#include <array>
#include <functional>
#include <optional>

namespace eds {

// input rejected on mathematical grounds (conjugacy, closedness)
struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// C^2 curve of one variable: exact polynomial or natural cubic spline through
// samples. Derivatives and antiderivatives are structural, never finite
// differences.
class Curve {
public:
    static Curve polynomial(const Expr& e, const std::string& var);
    // natural cubic spline; xs strictly increasing, at least 3 samples
    static Curve tabulated(std::vector<double> xs, std::vector<double> ys);

    double value(double t) const;
    double d1(double t) const;
    double d2(double t) const;
    double d3(double t) const;  // piecewise constant on the spline branch
    // antiderivative vanishing at base()
    double antiderivative(double t) const;
    // 0 when the window contains it, otherwise the left end
    double base() const;
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    bool is_polynomial() const { return poly_.has_value(); }
    const Expr& poly() const;
    const std::string& var() const { return var_; }

private:
    Curve() = default;
    std::optional<Expr> poly_, pd1_, pd2_, pd3_, pint_;
    std::string var_;
    std::vector<double> xs_, ys_, m2_;  // knots, values, second derivatives
    std::vector<double> cum_;           // segment integrals, accumulated
    double int_off_ = 0;
    double lo_ = -1, hi_ = 1;
    int segment(double t) const;
    double seg_anti(int i, double t) const;
};

// integral of a*b from the common base; exact when both factors are
// polynomials in the same variable, adaptive Simpson (abs tol 1e-12) otherwise
double antiderivative_of_product(const Curve& a, const Curve& b, double t);

// scalar component of a parametrized surface with structural partials; the
// partials may be absent for coordinates that never appear under a
// differential of the target chart
struct Component {
    std::function<double(double, double)> f, fu, fv;
};

struct SolutionMap {
    PdeClass cls = PdeClass::Hyperbolic;
    std::string chart_id;  // embedded model chart this maps into
    std::array<std::string, 2> params;
    std::array<double, 2> lo{-1, -1};
    std::array<double, 2> hi{1, 1};
    std::vector<Component> comp;  // chart coordinate order
};

// explicit integral surfaces of the three models, parametrized by the
// coordinates named in the chart id; inputs are curves in the indicated
// parameter
SolutionMap wave_solution_xt(const Curve& y /* of t */, const Curve& z0 /* of x */);
SolutionMap wave_solution_rt(const Curve& x /* of r */, const Curve& y /* of t */);
SolutionMap parabolic_solution_st(const Curve& y /* of s */, const Curve& x0 /* of s */);

// conjugate input pair: y + i x holomorphic in r + i s. Rejects pairs that
// violate the conjugacy equations (y_r = x_s, y_s = -x_r) at cr_tol, and
// cross-checks the recovered potentials by two-leg path integration from the
// origin against both leg orders.
SolutionMap laplace_solution_rs(const Expr& y, const Expr& x, double cr_tol = 1e-10);

// y + i x = sum_k (re_k + i im_k) (r + i s)^k
std::pair<Expr, Expr> holomorphic_pair(const std::vector<std::pair<Rational, Rational>>& coeffs);

struct VerificationReport {
    bool pass = false;
    double max_residual = 0;
    double tol = 1e-9;
    int grid = 30;
    std::vector<std::pair<std::string, double>> per_generator;
};

// pulls every chart generator back through the map on a grid x grid lattice
// over the parameter window; residual = largest pullback coefficient
VerificationReport verify_solution(const SolutionMap& sol, double tol = 1e-9, int grid = 30);

// 2 - rank of the Jacobian of the independent-variable pair (x, y)
int corank_at(const SolutionMap& sol, double u, double v, double tol = 1e-9);

struct SingularPoint {
    double u = 0, v = 0;
    int corank = 0;
};

// lattice scan for parameter points where the base projection degenerates
std::vector<SingularPoint> scan_singular(const SolutionMap& sol, int grid = 61, double tol = 1e-7);

} // namespace eds
