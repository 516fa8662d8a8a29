#ifndef VIRGEO_RATIONAL_HPP
#define VIRGEO_RATIONAL_HPP

#include <string>

#include "virgeo/bigint.hpp"
#include "virgeo/error.hpp"

namespace virgeo {

/// Exact rational number, always normalized: den > 0, gcd(num, den) = 1.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}
    Rational(int v) : num_(v), den_(1) {}
    Rational(long long num, long long den) : num_(num), den_(den) { normalize(); }
    Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    /// Parses "p", "p/q", or a plain decimal like "-3.25" (exact).
    static Rational parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash != std::string::npos)
            return Rational(BigInt::from_decimal(s.substr(0, slash)),
                            BigInt::from_decimal(s.substr(slash + 1)));
        auto dot = s.find('.');
        if (dot == std::string::npos) return Rational(BigInt::from_decimal(s), BigInt(1));
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        BigInt den(1);
        for (size_t i = dot + 1; i < s.size(); ++i) den = den * BigInt(10);
        return Rational(BigInt::from_decimal(digits), den);
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_negative() const { return num_.is_negative(); }
    int sign() const { return num_.sign(); }

    double to_double() const { return num_.to_double() / den_.to_double(); }

    std::string str() const {
        if (den_ == BigInt(1)) return num_.to_decimal();
        return num_.to_decimal() + "/" + den_.to_decimal();
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        // cross-reduce before multiplying to keep magnitudes small
        BigInt g1 = BigInt::gcd(a.num_, b.den_);
        BigInt g2 = BigInt::gcd(b.num_, a.den_);
        Rational r;
        r.num_ = (a.num_ / g1) * (b.num_ / g2);
        r.den_ = (a.den_ / g2) * (b.den_ / g1);
        if (r.num_.is_zero()) r.den_ = BigInt(1);
        return r;
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) raise(errc::degenerate_divisor, "rational division by zero");
        Rational inv;
        inv.num_ = b.den_;
        inv.den_ = b.num_;
        if (inv.den_.is_negative()) { inv.num_ = -inv.num_; inv.den_ = -inv.den_; }
        return a * inv;
    }
    Rational operator-() const {
        Rational r = *this;
        r.num_ = -r.num_;
        return r;
    }
    Rational& operator+=(const Rational& b) { *this = *this + b; return *this; }
    Rational& operator-=(const Rational& b) { *this = *this - b; return *this; }
    Rational& operator*=(const Rational& b) { *this = *this * b; return *this; }
    Rational& operator/=(const Rational& b) { *this = *this / b; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (a.num_ * b.den_) < (b.num_ * a.den_);
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return is_negative() ? -*this : *this; }

private:
    void normalize() {
        if (den_.is_zero()) raise(errc::degenerate_divisor, "rational with zero denominator");
        if (num_.is_zero()) { den_ = BigInt(1); return; }
        if (den_.is_negative()) { num_ = -num_; den_ = -den_; }
        BigInt g = BigInt::gcd(num_, den_);
        if (!(g == BigInt(1))) { num_ = num_ / g; den_ = den_ / g; }
    }

    BigInt num_;
    BigInt den_;
};

} // namespace virgeo

#endif
