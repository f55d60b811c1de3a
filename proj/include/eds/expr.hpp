#pragma once

#include "eds/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace eds {

struct ParseError : std::runtime_error {
    size_t position; // 0-based offset into the input text
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ordered list of coordinate names; all forms and samples refer to one of these.
class Chart {
public:
    Chart() = default;
    explicit Chart(std::vector<std::string> coords);

    int dim() const { return static_cast<int>(coords_.size()); }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::string& coord(int i) const { return coords_.at(i); }
    // -1 when absent
    int index_of(const std::string& name) const;
    bool has(const std::string& name) const { return index_of(name) >= 0; }

    bool operator==(const Chart& o) const { return coords_ == o.coords_; }
    bool operator!=(const Chart& o) const { return !(*this == o); }

private:
    std::vector<std::string> coords_;
    std::unordered_map<std::string, int> index_;
};

enum class Fn { Sin, Cos, Exp, Log, Sqrt };
const char* fn_name(Fn f);

using Env = std::unordered_map<std::string, double>;
using ExactEnv = std::map<std::string, Rational>;

// Immutable expression tree: rational constants, coordinate references,
// n-ary sums and products, integer powers, quotients, unary elementary calls.
// Construction applies constant folding and 0/1 identities only.
class Expr {
public:
    enum class Kind { Const, Var, Sum, Prod, Pow, Quot, Call };

    Expr(); // zero
    static Expr constant(Rational c);
    static Expr constant(long long c) { return constant(Rational(c)); }
    static Expr var(std::string name);
    static Expr sum(std::vector<Expr> terms);
    static Expr prod(std::vector<Expr> factors);
    static Expr pow(Expr base, int k);
    static Expr quot(Expr num, Expr den);
    static Expr call(Fn f, Expr arg);

    Kind kind() const { return node_->kind; }
    bool is_zero_const() const { return kind() == Kind::Const && node_->cval.is_zero(); }
    bool is_const() const { return kind() == Kind::Const; }
    const Rational& const_value() const { return node_->cval; }
    const std::string& var_name() const { return node_->name; }
    const std::vector<Expr>& kids() const { return node_->kids; }
    int exponent() const { return node_->expo; }
    Fn fn() const { return node_->fn; }

    bool same_tree(const Expr& o) const;

    double eval(const Env& env) const;
    // Exact evaluation; throws EvalError if the tree contains elementary calls.
    Rational eval_exact(const ExactEnv& env) const;

    Expr diff(const std::string& coord) const;
    Expr substitute(const std::map<std::string, Expr>& repl) const;

    // Every coordinate name referenced by the tree, in first-appearance order.
    std::vector<std::string> free_vars() const;

    std::string str() const;

private:
    struct Node {
        Kind kind = Kind::Const;
        Rational cval;
        std::string name;
        std::vector<Expr> kids;
        int expo = 0;
        Fn fn = Fn::Sin;
    };
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr make(Node n);
    std::shared_ptr<const Node> node_;

    void collect_vars(std::vector<std::string>& out) const;
    void print(std::string& out, int parent_prec) const;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);

// Grammar:
//   expr   := ('-')? term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' integer)?
//   base   := number | ident | func '(' expr ')' | '(' expr ')' | '-' base
// Identifiers must name chart coordinates; func is one of sin cos exp log sqrt.
Expr parse_expr(const std::string& text, const Chart& chart);

// Probabilistic zero test: 20 seeded pseudo-random points in [-2,2]^dim,
// |value| < 1e-9 at all of them counts as zero. Points raising domain
// errors are redrawn (deterministically).
bool is_zero_probabilistic(const Expr& e, const Chart& chart, uint64_t seed = 42);

// Dense coefficients of e as a polynomial in `var` (coefficients may involve
// other coordinates). Throws EvalError when e is not polynomial in var.
std::vector<Expr> poly_coeffs(const Expr& e, const std::string& var);

// Exact termwise antiderivative in `var`; integration constant 0.
Expr integrate_poly(const Expr& e, const std::string& var);

} // namespace eds
