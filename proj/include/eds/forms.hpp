#pragma once

#include "eds/expr.hpp"

#include <Eigen/Dense>
#include <map>

namespace eds {

struct ChartMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateBasis : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pointwise value of a degree-k form: sparse antisymmetric k-linear array.
class FormValue {
public:
    FormValue(int degree, int dim) : degree_(degree), dim_(dim) {}

    int degree() const { return degree_; }
    int dim() const { return dim_; }
    const std::map<std::vector<int>, double>& terms() const { return terms_; }

    // idx must be strictly increasing
    void set(std::vector<int> idx, double v);
    double coeff(const std::vector<int>& idx) const;

    // value on k tangent vectors (each of size dim)
    double apply(const std::vector<Eigen::VectorXd>& vectors) const;

    Eigen::RowVectorXd as_covector() const;  // degree 1
    Eigen::MatrixXd as_matrix() const;       // degree 2, antisymmetric dim x dim

private:
    int degree_, dim_;
    std::map<std::vector<int>, double> terms_;
};

// Differential form with Expr coefficients over strictly increasing index tuples.
class Form {
public:
    Form() : degree_(0) {}
    static Form zero(const Chart& c, int degree);
    static Form scalar(const Chart& c, Expr f);
    static Form d_coord(const Chart& c, const std::string& name);

    const Chart& chart() const { return chart_; }
    int degree() const { return degree_; }
    const std::map<std::vector<int>, Expr>& terms() const { return terms_; }
    Expr coeff(const std::vector<int>& idx) const;

    bool is_structural_zero() const { return terms_.empty(); }
    bool vanishes_probabilistically(uint64_t seed = 42) const;

    Form wedge(const Form& o) const;
    Form d() const;

    Form operator+(const Form& o) const;
    Form operator-(const Form& o) const;
    Form operator-() const;
    Form operator*(const Expr& f) const;

    // substitute coordinate expressions into every coefficient (coefficients only;
    // the dx_i are untouched). Used for cutting to submanifolds before pullback.
    Form substitute_coeffs(const std::map<std::string, Expr>& repl) const;

    FormValue eval(const Env& point) const;
    FormValue eval_at(const Eigen::VectorXd& point) const;

    // this form lives on chart(); images give each of chart()'s coordinates as an
    // Expr over `source`; the result lives on `source`.
    Form pullback(const Chart& source, const std::vector<Expr>& images) const;

    // same coordinate names inside a larger chart
    Form rechart(const Chart& target) const;

    std::string str() const;

private:
    Chart chart_;
    int degree_ = 0;
    std::map<std::vector<int>, Expr> terms_;
    // sorts idx, tracks parity, drops structural zeros and repeated indices
    void add_term(std::vector<int> idx, Expr c);
};

Env env_of(const Chart& c, const Eigen::VectorXd& point);

// M[i][j] = fv(basis[i], basis[j]); requires 4 independent vectors (relative rank
// tolerance `tol`), throws DegenerateBasis otherwise.
Eigen::Matrix4d restrict2(const FormValue& fv, const std::vector<Eigen::VectorXd>& basis,
                          double tol = 1e-9);

} // namespace eds
