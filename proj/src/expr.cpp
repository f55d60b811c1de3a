#include "eds/expr.hpp"

#include <cctype>
#include <cmath>
#include <random>

namespace eds {

Chart::Chart(std::vector<std::string> coords) : coords_(std::move(coords)) {
    for (int i = 0; i < static_cast<int>(coords_.size()); ++i) {
        auto [it, fresh] = index_.emplace(coords_[i], i);
        (void)it;
        if (!fresh) throw std::invalid_argument("duplicate coordinate name: " + coords_[i]);
    }
}

int Chart::index_of(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

const char* fn_name(Fn f) {
    switch (f) {
        case Fn::Sin: return "sin";
        case Fn::Cos: return "cos";
        case Fn::Exp: return "exp";
        case Fn::Log: return "log";
        case Fn::Sqrt: return "sqrt";
    }
    return "?";
}

Expr::Expr() {
    Node n;
    n.kind = Kind::Const;
    n.cval = Rational(0);
    node_ = std::make_shared<const Node>(std::move(n));
}

Expr Expr::make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

Expr Expr::constant(Rational c) {
    Node n;
    n.kind = Kind::Const;
    n.cval = std::move(c);
    return make(std::move(n));
}

Expr Expr::var(std::string name) {
    Node n;
    n.kind = Kind::Var;
    n.name = std::move(name);
    return make(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    Rational c(0);
    for (auto& t : terms) {
        if (t.kind() == Kind::Sum) {
            for (auto& k : t.kids()) {
                if (k.is_const()) c = c + k.const_value();
                else flat.push_back(k);
            }
        } else if (t.is_const()) {
            c = c + t.const_value();
        } else {
            flat.push_back(std::move(t));
        }
    }
    if (!c.is_zero()) flat.push_back(constant(c));
    if (flat.empty()) return constant(Rational(0));
    if (flat.size() == 1) return flat[0];
    Node n;
    n.kind = Kind::Sum;
    n.kids = std::move(flat);
    return make(std::move(n));
}

Expr Expr::prod(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    Rational c(1);
    for (auto& f : factors) {
        if (f.kind() == Kind::Prod) {
            for (auto& k : f.kids()) {
                if (k.is_const()) c = c * k.const_value();
                else flat.push_back(k);
            }
        } else if (f.is_const()) {
            c = c * f.const_value();
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (c.is_zero()) return constant(Rational(0));
    if (flat.empty()) return constant(c);
    if (!c.is_one()) flat.insert(flat.begin(), constant(c));
    if (flat.size() == 1) return flat[0];
    Node n;
    n.kind = Kind::Prod;
    n.kids = std::move(flat);
    return make(std::move(n));
}

Expr Expr::pow(Expr base, int k) {
    if (k == 0) return constant(Rational(1));
    if (k == 1) return base;
    if (base.is_const()) {
        if (k < 0 && base.const_value().is_zero()) {
            // keep a quotient node so the error surfaces at evaluation
            return quot(constant(Rational(1)), constant(Rational(0)));
        }
        return constant(base.const_value().pow(k));
    }
    if (base.kind() == Kind::Pow) {
        int inner = base.exponent();
        Expr b = base.kids()[0];
        long long total = static_cast<long long>(inner) * k;
        if (total > -1000000 && total < 1000000) return pow(b, static_cast<int>(total));
    }
    Node n;
    n.kind = Kind::Pow;
    n.kids = {std::move(base)};
    n.expo = k;
    return make(std::move(n));
}

Expr Expr::quot(Expr num, Expr den) {
    if (den.is_const() && !den.const_value().is_zero()) {
        return prod({std::move(num), constant(Rational(1) / den.const_value())});
    }
    if (num.is_zero_const() && !(den.is_const() && den.const_value().is_zero())) {
        return constant(Rational(0));
    }
    Node n;
    n.kind = Kind::Quot;
    n.kids = {std::move(num), std::move(den)};
    return make(std::move(n));
}

Expr Expr::call(Fn f, Expr arg) {
    Node n;
    n.kind = Kind::Call;
    n.fn = f;
    n.kids = {std::move(arg)};
    return make(std::move(n));
}

bool Expr::same_tree(const Expr& o) const {
    if (node_ == o.node_) return true;
    if (kind() != o.kind()) return false;
    switch (kind()) {
        case Kind::Const: return const_value() == o.const_value();
        case Kind::Var: return var_name() == o.var_name();
        case Kind::Pow:
            if (exponent() != o.exponent()) return false;
            break;
        case Kind::Call:
            if (fn() != o.fn()) return false;
            break;
        default: break;
    }
    if (kids().size() != o.kids().size()) return false;
    for (size_t i = 0; i < kids().size(); ++i)
        if (!kids()[i].same_tree(o.kids()[i])) return false;
    return true;
}

namespace {
double guard(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string("non-finite value in ") + what);
    return v;
}
} // namespace

double Expr::eval(const Env& env) const {
    switch (kind()) {
        case Kind::Const: return node_->cval.to_double();
        case Kind::Var: {
            auto it = env.find(node_->name);
            if (it == env.end()) throw EvalError("unassigned coordinate: " + node_->name);
            return it->second;
        }
        case Kind::Sum: {
            double s = 0;
            for (const auto& k : node_->kids) s += k.eval(env);
            return guard(s, "sum");
        }
        case Kind::Prod: {
            double p = 1;
            for (const auto& k : node_->kids) p *= k.eval(env);
            return guard(p, "product");
        }
        case Kind::Pow: {
            double b = node_->kids[0].eval(env);
            if (node_->expo < 0 && b == 0.0) throw DomainError("zero base with negative exponent");
            return guard(std::pow(b, node_->expo), "power");
        }
        case Kind::Quot: {
            double num = node_->kids[0].eval(env);
            double den = node_->kids[1].eval(env);
            if (den == 0.0) throw DomainError("division by zero");
            return guard(num / den, "quotient");
        }
        case Kind::Call: {
            double a = node_->kids[0].eval(env);
            switch (node_->fn) {
                case Fn::Sin: return guard(std::sin(a), "sin");
                case Fn::Cos: return guard(std::cos(a), "cos");
                case Fn::Exp: return guard(std::exp(a), "exp");
                case Fn::Log:
                    if (a <= 0) throw DomainError("log of a nonpositive value");
                    return guard(std::log(a), "log");
                case Fn::Sqrt:
                    if (a < 0) throw DomainError("sqrt of a negative value");
                    return guard(std::sqrt(a), "sqrt");
            }
            throw EvalError("unknown function");
        }
    }
    throw EvalError("corrupt expression node");
}

Rational Expr::eval_exact(const ExactEnv& env) const {
    switch (kind()) {
        case Kind::Const: return node_->cval;
        case Kind::Var: {
            auto it = env.find(node_->name);
            if (it == env.end()) throw EvalError("unassigned coordinate: " + node_->name);
            return it->second;
        }
        case Kind::Sum: {
            Rational s(0);
            for (const auto& k : node_->kids) s = s + k.eval_exact(env);
            return s;
        }
        case Kind::Prod: {
            Rational p(1);
            for (const auto& k : node_->kids) p = p * k.eval_exact(env);
            return p;
        }
        case Kind::Pow: return node_->kids[0].eval_exact(env).pow(node_->expo);
        case Kind::Quot: {
            Rational den = node_->kids[1].eval_exact(env);
            if (den.is_zero()) throw DomainError("division by zero");
            return node_->kids[0].eval_exact(env) / den;
        }
        case Kind::Call: throw EvalError("exact evaluation of an elementary function");
    }
    throw EvalError("corrupt expression node");
}

Expr Expr::diff(const std::string& coord) const {
    switch (kind()) {
        case Kind::Const: return constant(Rational(0));
        case Kind::Var: return constant(Rational(node_->name == coord ? 1 : 0));
        case Kind::Sum: {
            std::vector<Expr> d;
            for (const auto& k : node_->kids) d.push_back(k.diff(coord));
            return sum(std::move(d));
        }
        case Kind::Prod: {
            std::vector<Expr> terms;
            for (size_t i = 0; i < node_->kids.size(); ++i) {
                std::vector<Expr> fs;
                for (size_t j = 0; j < node_->kids.size(); ++j)
                    fs.push_back(i == j ? node_->kids[j].diff(coord) : node_->kids[j]);
                terms.push_back(prod(std::move(fs)));
            }
            return sum(std::move(terms));
        }
        case Kind::Pow: {
            const Expr& b = node_->kids[0];
            return prod({constant(Rational(node_->expo)), pow(b, node_->expo - 1), b.diff(coord)});
        }
        case Kind::Quot: {
            const Expr& a = node_->kids[0];
            const Expr& b = node_->kids[1];
            Expr num = sum({prod({a.diff(coord), b}), prod({constant(Rational(-1)), a, b.diff(coord)})});
            return quot(std::move(num), pow(b, 2));
        }
        case Kind::Call: {
            const Expr& a = node_->kids[0];
            Expr da = a.diff(coord);
            switch (node_->fn) {
                case Fn::Sin: return prod({call(Fn::Cos, a), std::move(da)});
                case Fn::Cos: return prod({constant(Rational(-1)), call(Fn::Sin, a), std::move(da)});
                case Fn::Exp: return prod({call(Fn::Exp, a), std::move(da)});
                case Fn::Log: return quot(std::move(da), a);
                case Fn::Sqrt:
                    return quot(std::move(da), prod({constant(Rational(2)), call(Fn::Sqrt, a)}));
            }
            throw EvalError("unknown function");
        }
    }
    throw EvalError("corrupt expression node");
}

Expr Expr::substitute(const std::map<std::string, Expr>& repl) const {
    switch (kind()) {
        case Kind::Const: return *this;
        case Kind::Var: {
            auto it = repl.find(node_->name);
            return it == repl.end() ? *this : it->second;
        }
        case Kind::Sum:
        case Kind::Prod: {
            std::vector<Expr> k;
            for (const auto& c : node_->kids) k.push_back(c.substitute(repl));
            return kind() == Kind::Sum ? sum(std::move(k)) : prod(std::move(k));
        }
        case Kind::Pow: return pow(node_->kids[0].substitute(repl), node_->expo);
        case Kind::Quot:
            return quot(node_->kids[0].substitute(repl), node_->kids[1].substitute(repl));
        case Kind::Call: return call(node_->fn, node_->kids[0].substitute(repl));
    }
    throw EvalError("corrupt expression node");
}

void Expr::collect_vars(std::vector<std::string>& out) const {
    if (kind() == Kind::Var) {
        for (const auto& s : out)
            if (s == node_->name) return;
        out.push_back(node_->name);
        return;
    }
    for (const auto& k : node_->kids) k.collect_vars(out);
}

std::vector<std::string> Expr::free_vars() const {
    std::vector<std::string> out;
    collect_vars(out);
    return out;
}

// precedence: sum 1, product/quotient 2, power 3, atoms 4
void Expr::print(std::string& out, int parent_prec) const {
    switch (kind()) {
        case Kind::Const: {
            const Rational& c = node_->cval;
            bool need_paren = !c.is_integer() && parent_prec >= 3;
            bool neg_in_prod = c.sign() < 0 && parent_prec >= 2;
            if (need_paren || neg_in_prod) out += "(" + c.str() + ")";
            else out += c.str();
            return;
        }
        case Kind::Var: out += node_->name; return;
        case Kind::Sum: {
            bool paren = parent_prec >= 2;
            if (paren) out += "(";
            for (size_t i = 0; i < node_->kids.size(); ++i) {
                const Expr& t = node_->kids[i];
                bool neg = (t.is_const() && t.const_value().sign() < 0) ||
                           (t.kind() == Kind::Prod && t.kids()[0].is_const() &&
                            t.kids()[0].const_value().sign() < 0);
                if (i == 0) {
                    if (neg) {
                        out += "-";
                        Expr m = prod({constant(Rational(-1)), t});
                        m.print(out, m.kind() == Kind::Sum ? 2 : 1);
                        continue;
                    }
                } else {
                    if (neg) {
                        out += " - ";
                        Expr m = prod({constant(Rational(-1)), t});
                        m.print(out, m.kind() == Kind::Sum ? 2 : 1);
                        continue;
                    }
                    out += " + ";
                }
                t.print(out, 1);
            }
            if (paren) out += ")";
            return;
        }
        case Kind::Prod: {
            bool paren = parent_prec >= 3;
            if (paren) out += "(";
            // a leading negative constant may print bare only where a unary
            // minus is legal (start of an expression context)
            bool at_expr_start = paren || parent_prec <= 1;
            for (size_t i = 0; i < node_->kids.size(); ++i) {
                if (i) out += "*";
                if (i == 0 && node_->kids[0].is_const()) {
                    const Rational& c = node_->kids[0].const_value();
                    if (c.sign() < 0 && !at_expr_start) out += "(" + c.str() + ")";
                    else out += c.str();
                    continue;
                }
                node_->kids[i].print(out, 2);
            }
            if (paren) out += ")";
            return;
        }
        case Kind::Pow: {
            node_->kids[0].print(out, 3);
            out += "^" + std::to_string(node_->expo);
            return;
        }
        case Kind::Quot: {
            // parenthesize inside products too: x*(a/b) must not re-parse as (x*a)/b
            bool paren = parent_prec >= 2;
            if (paren) out += "(";
            node_->kids[0].print(out, 2);
            out += "/";
            node_->kids[1].print(out, 3); // force parens on any compound divisor
            if (paren) out += ")";
            return;
        }
        case Kind::Call: {
            out += fn_name(node_->fn);
            out += "(";
            node_->kids[0].print(out, 0);
            out += ")";
            return;
        }
    }
}

std::string Expr::str() const {
    std::string out;
    print(out, 0);
    return out;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) {
    return Expr::sum({a, Expr::prod({Expr::constant(Rational(-1)), b})});
}
Expr operator-(const Expr& a) { return Expr::prod({Expr::constant(Rational(-1)), a}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::prod({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::quot(a, b); }

// ---------------------------------------------------------------- parser

namespace {

struct Token {
    enum Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End } type;
    std::string text;
    size_t pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }
    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
        size_t start = i_;
        if (i_ >= s_.size()) { tok_ = {Token::End, "", start}; return; }
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string t;
            while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.'))
                t += s_[i_++];
            tok_ = {Token::Number, t, start};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string t;
            while (i_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                t += s_[i_++];
            tok_ = {Token::Ident, t, start};
            return;
        }
        ++i_;
        switch (c) {
            case '+': tok_ = {Token::Plus, "+", start}; return;
            case '-': tok_ = {Token::Minus, "-", start}; return;
            case '*': tok_ = {Token::Star, "*", start}; return;
            case '/': tok_ = {Token::Slash, "/", start}; return;
            case '^': tok_ = {Token::Caret, "^", start}; return;
            case '(': tok_ = {Token::LParen, "(", start}; return;
            case ')': tok_ = {Token::RParen, ")", start}; return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }

    const std::string& s_;
    size_t i_ = 0;
    Token tok_;
};

class Parser {
public:
    Parser(const std::string& text, const Chart& chart) : lex_(text), chart_(chart) {}

    Expr parse() {
        Expr e = expr();
        if (lex_.peek().type != Token::End)
            throw ParseError("trailing input '" + lex_.peek().text + "'", lex_.peek().pos);
        return e;
    }

private:
    Expr expr() {
        bool neg = false;
        if (lex_.peek().type == Token::Minus) { lex_.take(); neg = true; }
        else if (lex_.peek().type == Token::Plus) lex_.take();
        Expr e = term();
        if (neg) e = -e;
        while (lex_.peek().type == Token::Plus || lex_.peek().type == Token::Minus) {
            Token op = lex_.take();
            Expr rhs = term();
            e = op.type == Token::Plus ? e + rhs : e - rhs;
        }
        return e;
    }

    Expr term() {
        Expr e = factor();
        while (lex_.peek().type == Token::Star || lex_.peek().type == Token::Slash) {
            Token op = lex_.take();
            Expr rhs = factor();
            e = op.type == Token::Star ? e * rhs : e / rhs;
        }
        return e;
    }

    Expr factor() {
        Expr b = base();
        if (lex_.peek().type == Token::Caret) {
            lex_.take();
            bool neg = false;
            if (lex_.peek().type == Token::Minus) { lex_.take(); neg = true; }
            Token t = lex_.peek();
            if (t.type != Token::Number || t.text.find('.') != std::string::npos)
                throw ParseError("exponent must be an integer", t.pos);
            lex_.take();
            long long k = std::stoll(t.text);
            if (neg) k = -k;
            if (k > 1000000 || k < -1000000) throw ParseError("exponent out of range", t.pos);
            return Expr::pow(b, static_cast<int>(k));
        }
        return b;
    }

    Expr base() {
        Token t = lex_.peek();
        switch (t.type) {
            case Token::Minus:
                lex_.take();
                return -base();
            case Token::Number:
                lex_.take();
                return Expr::constant(Rational::parse_decimal(t.text));
            case Token::LParen: {
                lex_.take();
                Expr e = expr();
                if (lex_.peek().type != Token::RParen)
                    throw ParseError("expected ')'", lex_.peek().pos);
                lex_.take();
                return e;
            }
            case Token::Ident: {
                lex_.take();
                static const std::pair<const char*, Fn> fns[] = {
                    {"sin", Fn::Sin}, {"cos", Fn::Cos}, {"exp", Fn::Exp},
                    {"log", Fn::Log}, {"sqrt", Fn::Sqrt}};
                for (auto [nm, f] : fns) {
                    if (t.text == nm) {
                        if (lex_.peek().type != Token::LParen)
                            throw ParseError("expected '(' after function " + t.text,
                                             lex_.peek().pos);
                        lex_.take();
                        Expr a = expr();
                        if (lex_.peek().type != Token::RParen)
                            throw ParseError("expected ')'", lex_.peek().pos);
                        lex_.take();
                        return Expr::call(f, a);
                    }
                }
                if (!chart_.has(t.text))
                    throw ParseError("unknown identifier '" + t.text + "'", t.pos);
                return Expr::var(t.text);
            }
            default:
                throw ParseError("expected a value", t.pos);
        }
    }

    Lexer lex_;
    const Chart& chart_;
};

} // namespace

Expr parse_expr(const std::string& text, const Chart& chart) {
    return Parser(text, chart).parse();
}

bool is_zero_probabilistic(const Expr& e, const Chart& chart, uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto u = [&rng]() {
        return -2.0 + 4.0 * (static_cast<double>(rng() >> 11) * 0x1p-53);
    };
    int accepted = 0, attempts = 0;
    while (accepted < 20 && attempts < 400) {
        ++attempts;
        Env env;
        for (const auto& c : chart.coords()) env[c] = u();
        try {
            if (std::abs(e.eval(env)) >= 1e-9) return false;
        } catch (const DomainError&) {
            continue; // redraw
        }
        ++accepted;
    }
    if (accepted == 0) throw EvalError("zero test: expression has empty domain on [-2,2]^dim");
    return true;
}

std::vector<Expr> poly_coeffs(const Expr& e, const std::string& var) {
    using K = Expr::Kind;
    auto depends = [&](const Expr& x) {
        for (const auto& v : x.free_vars())
            if (v == var) return true;
        return false;
    };
    if (!depends(e)) return {e};
    switch (e.kind()) {
        case K::Var: return {Expr::constant(Rational(0)), Expr::constant(Rational(1))};
        case K::Sum: {
            std::vector<Expr> acc;
            for (const auto& k : e.kids()) {
                auto c = poly_coeffs(k, var);
                if (c.size() > acc.size()) acc.resize(c.size(), Expr::constant(Rational(0)));
                for (size_t i = 0; i < c.size(); ++i) acc[i] = acc[i] + c[i];
            }
            return acc;
        }
        case K::Prod: {
            std::vector<Expr> acc = {Expr::constant(Rational(1))};
            for (const auto& k : e.kids()) {
                auto c = poly_coeffs(k, var);
                std::vector<Expr> next(acc.size() + c.size() - 1, Expr::constant(Rational(0)));
                for (size_t i = 0; i < acc.size(); ++i)
                    for (size_t j = 0; j < c.size(); ++j)
                        next[i + j] = next[i + j] + acc[i] * c[j];
                acc = std::move(next);
            }
            return acc;
        }
        case K::Pow: {
            if (e.exponent() < 0) throw EvalError("not polynomial in " + var + ": negative power");
            auto c = poly_coeffs(e.kids()[0], var);
            std::vector<Expr> acc = {Expr::constant(Rational(1))};
            for (int n = 0; n < e.exponent(); ++n) {
                std::vector<Expr> next(acc.size() + c.size() - 1, Expr::constant(Rational(0)));
                for (size_t i = 0; i < acc.size(); ++i)
                    for (size_t j = 0; j < c.size(); ++j)
                        next[i + j] = next[i + j] + acc[i] * c[j];
                acc = std::move(next);
            }
            return acc;
        }
        case K::Quot: {
            if (depends(e.kids()[1]))
                throw EvalError("not polynomial in " + var + ": variable divisor");
            auto c = poly_coeffs(e.kids()[0], var);
            for (auto& x : c) x = Expr::quot(x, e.kids()[1]);
            return c;
        }
        default:
            throw EvalError("not polynomial in " + var);
    }
}

Expr integrate_poly(const Expr& e, const std::string& var) {
    auto c = poly_coeffs(e, var);
    std::vector<Expr> terms;
    for (size_t k = 0; k < c.size(); ++k) {
        if (c[k].is_zero_const()) continue;
        Expr mono = Expr::pow(Expr::var(var), static_cast<int>(k) + 1);
        terms.push_back(c[k] * mono * Expr::constant(Rational(1, BigInt(k + 1))));
    }
    return Expr::sum(std::move(terms));
}

} // namespace eds
