#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace eds {

using BigInt = boost::multiprecision::cpp_int;

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact rational with arbitrary-precision integer parts.
// Invariant: den > 0, gcd(num, den) = 1, zero is 0/1.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ == 0 ? 0 : (num_ > 0 ? 1 : -1); }

    Rational operator-() const { return Rational(-num_, den_, raw_tag{}); }

    Rational operator+(const Rational& o) const {
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Rational operator-(const Rational& o) const {
        return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    Rational operator*(const Rational& o) const {
        return Rational(num_ * o.num_, den_ * o.den_);
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) throw DomainError("rational division by zero");
        return Rational(num_ * o.den_, den_ * o.num_);
    }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return num_ * o.den_ < o.num_ * den_; }

    // Integer powers stay exact; negative exponents require a nonzero base.
    Rational pow(int k) const {
        if (k == 0) return Rational(1);
        if (k < 0) {
            if (num_ == 0) throw DomainError("zero raised to a negative power");
            return Rational(1) / pow(-k);
        }
        Rational base = *this, acc(1);
        int e = k;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    double to_double() const {
        return num_.convert_to<double>() / den_.convert_to<double>();
    }

    std::string str() const {
        std::string s = num_.str();
        if (den_ != 1) s += "/" + den_.str();
        return s;
    }

    // "123", "-7", "12.25" (decimal expands to an exact fraction)
    static Rational parse_decimal(const std::string& text) {
        std::string t = text;
        bool neg = false;
        size_t i = 0;
        if (i < t.size() && (t[i] == '+' || t[i] == '-')) { neg = t[i] == '-'; ++i; }
        std::string ip, fp;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ip += t[i++];
        if (i < t.size() && t[i] == '.') {
            ++i;
            while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) fp += t[i++];
        }
        if (i != t.size() || (ip.empty() && fp.empty()))
            throw std::invalid_argument("bad numeric literal: " + text);
        BigInt n = ip.empty() ? BigInt(0) : BigInt(ip);
        BigInt d = 1;
        for (char c : fp) {
            n = n * 10 + (c - '0');
            d *= 10;
        }
        if (neg) n = -n;
        return Rational(n, d);
    }

private:
    struct raw_tag {};
    Rational(BigInt n, BigInt d, raw_tag) : num_(std::move(n)), den_(std::move(d)) {}

    void normalize() {
        if (den_ == 0) throw DomainError("rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
        if (num_ == 0) den_ = 1;
    }

    BigInt num_, den_;
};

} // namespace eds
