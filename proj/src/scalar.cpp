#include "anisotl/scalar.hpp"

#include <cctype>

namespace anisotl {

mpq_class parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty rational literal");

    auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + text);
        if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
        q.canonicalize();
        return q;
    }

    auto dot = s.find('.');
    if (dot == std::string::npos) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad integer literal: " + text);
        q.canonicalize();
        return q;
    }

    // decimal: sign? digits '.' digits
    bool neg = false;
    std::string body = s;
    if (body[0] == '+' || body[0] == '-') {
        neg = body[0] == '-';
        body = body.substr(1);
        dot = body.find('.');
    }
    std::string ip = body.substr(0, dot);
    std::string fp = body.substr(dot + 1);
    if (ip.empty() && fp.empty()) throw std::invalid_argument("bad decimal literal: " + text);
    for (char c : ip + fp)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("bad decimal literal: " + text);
    mpz_class num(ip.empty() ? std::string("0") : ip);
    mpz_class den(1);
    for (char c : fp) {
        num *= 10;
        num += c - '0';
        den *= 10;
    }
    mpq_class q(num, den);
    q.canonicalize();
    if (neg) q = -q;
    return q;
}

std::string format_rational(const mpq_class& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

scalar scalar::rational(long num, long den) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return scalar(q);
}

const mpq_class& scalar::rat() const {
    if (!is_rational()) throw std::invalid_argument("scalar is not rational");
    return std::get<mpq_class>(v_);
}

double scalar::to_double() const {
    if (is_rational()) return std::get<mpq_class>(v_).get_d();
    return std::get<double>(v_);
}

bool scalar::is_zero() const {
    if (is_rational()) return sgn(std::get<mpq_class>(v_)) == 0;
    return std::get<double>(v_) == 0.0;
}

void scalar::check_same_mode(const scalar& o) const {
    if (mode() != o.mode()) throw std::invalid_argument("mixed-mode scalar arithmetic");
}

scalar scalar::operator+(const scalar& o) const {
    check_same_mode(o);
    if (is_rational()) return scalar(mpq_class(rat() + o.rat()));
    return floating(to_double() + o.to_double());
}

scalar scalar::operator-(const scalar& o) const {
    check_same_mode(o);
    if (is_rational()) return scalar(mpq_class(rat() - o.rat()));
    return floating(to_double() - o.to_double());
}

scalar scalar::operator*(const scalar& o) const {
    check_same_mode(o);
    if (is_rational()) return scalar(mpq_class(rat() * o.rat()));
    return floating(to_double() * o.to_double());
}

scalar scalar::operator/(const scalar& o) const {
    check_same_mode(o);
    if (o.is_zero()) throw std::invalid_argument("scalar division by zero");
    if (is_rational()) return scalar(mpq_class(rat() / o.rat()));
    return floating(to_double() / o.to_double());
}

scalar scalar::operator-() const {
    if (is_rational()) return scalar(mpq_class(-rat()));
    return floating(-to_double());
}

bool scalar::operator==(const scalar& o) const {
    if (mode() != o.mode()) return false;
    if (is_rational()) return rat() == o.rat();
    return to_double() == o.to_double();
}

std::string scalar::str() const {
    if (is_rational()) return format_rational(rat());
    return std::to_string(to_double());
}

exponent exponent::of(const mpq_class& v) {
    if (sgn(v) <= 0) throw std::invalid_argument("exponent must be positive");
    exponent e;
    e.inf_ = false;
    e.v_ = v;
    e.v_.canonicalize();
    return e;
}

exponent exponent::parse(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "INF" || text == "infinity") return infinity();
    return of(parse_rational(text));
}

const mpq_class& exponent::value() const {
    if (inf_) throw std::invalid_argument("exponent is infinite");
    return v_;
}

double exponent::to_double() const {
    if (inf_) return std::numeric_limits<double>::infinity();
    return v_.get_d();
}

mpq_class exponent::reciprocal_exact() const {
    if (inf_) return mpq_class(0);
    mpq_class r(v_.get_den(), v_.get_num());
    r.canonicalize();
    return r;
}

bool exponent::operator==(const exponent& o) const {
    if (inf_ != o.inf_) return false;
    if (inf_) return true;
    return v_ == o.v_;
}

} // namespace anisotl
