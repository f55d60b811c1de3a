#include "eds/forms.hpp"

#include <algorithm>
#include <sstream>

namespace eds {

namespace {

// sorts idx in place, returns permutation parity (+1/-1), or 0 on a repeated index
int sort_parity(std::vector<int>& idx) {
    int sign = 1;
    const size_t n = idx.size();
    for (size_t i = 0; i + 1 < n; ++i) {
        for (size_t j = 0; j + 1 < n - i; ++j) {
            if (idx[j] == idx[j + 1]) return 0;
            if (idx[j] > idx[j + 1]) {
                std::swap(idx[j], idx[j + 1]);
                sign = -sign;
            }
        }
    }
    return sign;
}

void check_same_chart(const Chart& a, const Chart& b) {
    if (!(a == b)) throw ChartMismatch("forms live on different charts");
}

} // namespace

void FormValue::set(std::vector<int> idx, double v) {
    if (v == 0.0) {
        terms_.erase(idx);
        return;
    }
    terms_[std::move(idx)] = v;
}

double FormValue::coeff(const std::vector<int>& idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? 0.0 : it->second;
}

double FormValue::apply(const std::vector<Eigen::VectorXd>& vectors) const {
    if (static_cast<int>(vectors.size()) != degree_)
        throw std::invalid_argument("form degree does not match number of vectors");
    if (degree_ == 0) return coeff({});
    for (const auto& v : vectors)
        if (v.size() != dim_) throw std::invalid_argument("vector dimension mismatch");
    double total = 0.0;
    Eigen::MatrixXd A(degree_, degree_);
    for (const auto& [idx, c] : terms_) {
        for (int a = 0; a < degree_; ++a)
            for (int b = 0; b < degree_; ++b) A(a, b) = vectors[b](idx[a]);
        total += c * A.determinant();
    }
    return total;
}

Eigen::RowVectorXd FormValue::as_covector() const {
    if (degree_ != 1) throw std::invalid_argument("as_covector needs a 1-form value");
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(dim_);
    for (const auto& [idx, c] : terms_) v(idx[0]) = c;
    return v;
}

Eigen::MatrixXd FormValue::as_matrix() const {
    if (degree_ != 2) throw std::invalid_argument("as_matrix needs a 2-form value");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim_, dim_);
    for (const auto& [idx, c] : terms_) {
        M(idx[0], idx[1]) = c;
        M(idx[1], idx[0]) = -c;
    }
    return M;
}

void Form::add_term(std::vector<int> idx, Expr c) {
    int sign = sort_parity(idx);
    if (sign == 0 || c.is_zero_const()) return;
    Expr v = sign < 0 ? -c : c;
    auto it = terms_.find(idx);
    if (it == terms_.end()) {
        terms_.emplace(std::move(idx), std::move(v));
    } else {
        it->second = it->second + v;
        if (it->second.is_zero_const()) terms_.erase(it);
    }
}

Form Form::zero(const Chart& c, int degree) {
    Form f;
    f.chart_ = c;
    f.degree_ = degree;
    return f;
}

Form Form::scalar(const Chart& c, Expr f) {
    Form r = zero(c, 0);
    r.add_term({}, std::move(f));
    return r;
}

Form Form::d_coord(const Chart& c, const std::string& name) {
    const int i = c.index_of(name);
    if (i < 0) throw std::invalid_argument("d_coord: unknown coordinate '" + name + "'");
    Form r = zero(c, 1);
    r.add_term({i}, Expr::constant(Rational(1)));
    return r;
}

Expr Form::coeff(const std::vector<int>& idx) const {
    auto it = terms_.find(idx);
    return it == terms_.end() ? Expr::constant(Rational(0)) : it->second;
}

bool Form::vanishes_probabilistically(uint64_t seed) const {
    for (const auto& [idx, c] : terms_)
        if (!is_zero_probabilistic(c, chart_, seed)) return false;
    return true;
}

Form Form::wedge(const Form& o) const {
    check_same_chart(chart_, o.chart_);
    Form r = zero(chart_, degree_ + o.degree_);
    for (const auto& [ia, ca] : terms_) {
        for (const auto& [ib, cb] : o.terms_) {
            std::vector<int> idx = ia;
            idx.insert(idx.end(), ib.begin(), ib.end());
            r.add_term(std::move(idx), ca * cb);
        }
    }
    return r;
}

Form Form::d() const {
    Form r = zero(chart_, degree_ + 1);
    for (const auto& [idx, c] : terms_) {
        for (int j = 0; j < chart_.dim(); ++j) {
            Expr dc = c.diff(chart_.coord(j));
            if (dc.is_zero_const()) continue;
            std::vector<int> nidx;
            nidx.reserve(idx.size() + 1);
            nidx.push_back(j);
            nidx.insert(nidx.end(), idx.begin(), idx.end());
            r.add_term(std::move(nidx), std::move(dc));
        }
    }
    return r;
}

Form Form::operator+(const Form& o) const {
    check_same_chart(chart_, o.chart_);
    if (degree_ != o.degree_) throw std::invalid_argument("adding forms of different degree");
    Form r = *this;
    for (const auto& [idx, c] : o.terms_) r.add_term(idx, c);
    return r;
}

Form Form::operator-(const Form& o) const { return *this + (-o); }

Form Form::operator-() const {
    Form r = zero(chart_, degree_);
    for (const auto& [idx, c] : terms_) r.terms_.emplace(idx, -c);
    return r;
}

Form Form::operator*(const Expr& f) const {
    Form r = zero(chart_, degree_);
    for (const auto& [idx, c] : terms_) {
        Expr v = f * c;
        if (!v.is_zero_const()) r.terms_.emplace(idx, std::move(v));
    }
    return r;
}

Form Form::substitute_coeffs(const std::map<std::string, Expr>& repl) const {
    Form r = zero(chart_, degree_);
    for (const auto& [idx, c] : terms_) {
        Expr v = c.substitute(repl);
        if (!v.is_zero_const()) r.terms_.emplace(idx, std::move(v));
    }
    return r;
}

FormValue Form::eval(const Env& point) const {
    FormValue fv(degree_, chart_.dim());
    for (const auto& [idx, c] : terms_) fv.set(idx, c.eval(point));
    return fv;
}

Env env_of(const Chart& c, const Eigen::VectorXd& point) {
    if (point.size() != c.dim()) throw std::invalid_argument("point dimension mismatch");
    Env e;
    for (int i = 0; i < c.dim(); ++i) e[c.coord(i)] = point(i);
    return e;
}

FormValue Form::eval_at(const Eigen::VectorXd& point) const { return eval(env_of(chart_, point)); }

Form Form::pullback(const Chart& source, const std::vector<Expr>& images) const {
    if (static_cast<int>(images.size()) != chart_.dim())
        throw std::invalid_argument("pullback needs one image per target coordinate");
    std::map<std::string, Expr> repl;
    for (int i = 0; i < chart_.dim(); ++i) repl[chart_.coord(i)] = images[i];

    // d(images[i]) expanded over the source chart, cached per coordinate
    std::vector<Form> dimg;
    dimg.reserve(images.size());
    for (const auto& img : images) {
        Form di = Form::zero(source, 1);
        for (int j = 0; j < source.dim(); ++j) {
            Expr dc = img.diff(source.coord(j));
            if (!dc.is_zero_const()) di.add_term({j}, std::move(dc));
        }
        dimg.push_back(std::move(di));
    }

    Form r = zero(source, degree_);
    for (const auto& [idx, c] : terms_) {
        Form piece = Form::scalar(source, c.substitute(repl));
        for (int i : idx) piece = piece.wedge(dimg[i]);
        for (const auto& [pidx, pc] : piece.terms()) r.add_term(pidx, pc);
    }
    return r;
}

Form Form::rechart(const Chart& target) const {
    Form r = zero(target, degree_);
    for (const auto& [idx, c] : terms_) {
        std::vector<int> nidx;
        nidx.reserve(idx.size());
        for (int i : idx) {
            const int j = target.index_of(chart_.coord(i));
            if (j < 0)
                throw std::invalid_argument("rechart: target lacks coordinate '" +
                                            chart_.coord(i) + "'");
            nidx.push_back(j);
        }
        r.add_term(std::move(nidx), c);
    }
    return r;
}

std::string Form::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.str() << ")";
        for (size_t k = 0; k < idx.size(); ++k)
            os << (k == 0 ? " d" : "^d") << chart_.coord(idx[k]);
    }
    return os.str();
}

Eigen::Matrix4d restrict2(const FormValue& fv, const std::vector<Eigen::VectorXd>& basis,
                          double tol) {
    if (fv.degree() != 2) throw std::invalid_argument("restrict2 needs a 2-form value");
    if (basis.size() != 4) throw std::invalid_argument("restrict2 needs exactly 4 vectors");
    Eigen::MatrixXd B(fv.dim(), 4);
    for (int i = 0; i < 4; ++i) {
        if (basis[i].size() != fv.dim())
            throw std::invalid_argument("basis vector dimension mismatch");
        B.col(i) = basis[i];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
    const auto& s = svd.singularValues();
    if (s(0) == 0.0 || s(3) <= tol * s(0))
        throw DegenerateBasis("restrict2: basis vectors are numerically dependent");
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            const double v = fv.apply({basis[i], basis[j]});
            M(i, j) = v;
            M(j, i) = -v;
        }
    return M;
}

} // namespace eds
