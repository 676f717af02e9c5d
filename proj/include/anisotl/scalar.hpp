#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace anisotl {

enum class scalar_mode { rational, floating };

/// Parses "n", "n/d" or a plain decimal string ("-1.25") into an exact rational.
mpq_class parse_rational(const std::string& text);

/// Formats a rational as "n" or "n/d" in lowest terms.
std::string format_rational(const mpq_class& q);

/// One matrix entry: an exact rational or a double, tagged by mode.
/// Rationals are kept canonical (lowest terms, positive denominator).
/// Mixed-mode arithmetic throws; there is no silent coercion.
class scalar {
public:
    scalar() : v_(mpq_class(0)) {}
    explicit scalar(mpq_class q) : v_(std::move(q)) { std::get<mpq_class>(v_).canonicalize(); }
    static scalar rational(long num, long den = 1);
    static scalar rational(const std::string& text) { return scalar(parse_rational(text)); }
    static scalar floating(double x) { scalar s; s.v_ = x; return s; }

    scalar_mode mode() const {
        return std::holds_alternative<mpq_class>(v_) ? scalar_mode::rational : scalar_mode::floating;
    }
    bool is_rational() const { return mode() == scalar_mode::rational; }

    const mpq_class& rat() const;
    double to_double() const;
    bool is_zero() const;

    scalar operator+(const scalar& o) const;
    scalar operator-(const scalar& o) const;
    scalar operator*(const scalar& o) const;
    scalar operator/(const scalar& o) const;
    scalar operator-() const;
    bool operator==(const scalar& o) const;

    std::string str() const;

private:
    void check_same_mode(const scalar& o) const;
    std::variant<mpq_class, double> v_;
};

/// Exponent p or q from (0, inf]: a positive exact rational or infinity.
/// Exactness matters: space classification compares exponents for equality,
/// which a double representation of "1/3" would get wrong.
class exponent {
public:
    exponent() : inf_(false), v_(1) {}
    static exponent infinity() {
        exponent e;
        e.inf_ = true;
        return e;
    }
    static exponent of(const mpq_class& v);
    static exponent of(long num, long den = 1) { return of(mpq_class(num, den)); }
    /// Accepts "inf", "n/d" or decimal strings such as "0.5".
    static exponent parse(const std::string& text);

    bool is_inf() const { return inf_; }
    const mpq_class& value() const;
    double to_double() const;
    /// 1/p, with 1/inf = 0.
    double reciprocal() const { return inf_ ? 0.0 : 1.0 / to_double(); }
    mpq_class reciprocal_exact() const;

    bool operator==(const exponent& o) const;
    bool operator!=(const exponent& o) const { return !(*this == o); }

    std::string str() const { return inf_ ? "inf" : format_rational(v_); }

private:
    bool inf_;
    mpq_class v_;
};

} // namespace anisotl
