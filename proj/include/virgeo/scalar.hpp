#ifndef VIRGEO_SCALAR_HPP
#define VIRGEO_SCALAR_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>

#include "virgeo/error.hpp"
#include "virgeo/rational.hpp"

namespace virgeo {

/// Complex number over an exact component type (std::complex is only
/// specified for the builtin floating types).
template <class T>
struct Complex {
    T re{};
    T im{};

    Complex() = default;
    Complex(T r) : re(std::move(r)) {}
    Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}
    Complex(int v) : re(T(v)) {}

    friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
    friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
    Complex operator-() const { return {-re, -im}; }
    friend Complex operator*(const Complex& a, const Complex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Complex operator/(const Complex& a, const Complex& b) {
        T n = b.re * b.re + b.im * b.im;
        if (n.is_zero()) raise(errc::degenerate_divisor, "complex division by zero");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    Complex& operator+=(const Complex& b) { *this = *this + b; return *this; }
    Complex& operator-=(const Complex& b) { *this = *this - b; return *this; }
    Complex& operator*=(const Complex& b) { *this = *this * b; return *this; }
    Complex& operator/=(const Complex& b) { *this = *this / b; return *this; }
    friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    Complex conj() const { return {re, -im}; }
};

/// Exact complex rational: the scalar of the library's exact mode.
using GaussianRational = Complex<Rational>;
using CD = std::complex<double>;

// -------------------------------------------------------------------------
// scalar_traits: the uniform interface generic series/polynomial code uses.
// Specializations exist for double, std::complex<double>, Rational,
// Complex<Rational>, and (elsewhere) Poly<R> and TruncatedSeries<S>.
// -------------------------------------------------------------------------

template <class T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double zero_like(const double&) { return 0.0; }
    static double one_like(const double&) { return 1.0; }
    static bool is_zero(const double& v) { return v == 0.0; }
    static double from_ratio(const double&, long long n, long long d) {
        return static_cast<double>(n) / static_cast<double>(d);
    }
    static double conj(const double& v) { return v; }
    static double abs_approx(const double& v) { return std::abs(v); }
};

template <>
struct scalar_traits<CD> {
    static constexpr bool exact = false;
    static CD zero_like(const CD&) { return {0.0, 0.0}; }
    static CD one_like(const CD&) { return {1.0, 0.0}; }
    static bool is_zero(const CD& v) { return v == CD(0.0, 0.0); }
    static CD from_ratio(const CD&, long long n, long long d) {
        return CD(static_cast<double>(n) / static_cast<double>(d), 0.0);
    }
    static CD conj(const CD& v) { return std::conj(v); }
    static double abs_approx(const CD& v) { return std::abs(v); }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero_like(const Rational&) { return Rational(0); }
    static Rational one_like(const Rational&) { return Rational(1); }
    static bool is_zero(const Rational& v) { return v.is_zero(); }
    static Rational from_ratio(const Rational&, long long n, long long d) { return Rational(n, d); }
    static Rational conj(const Rational& v) { return v; }
    static double abs_approx(const Rational& v) { return std::abs(v.to_double()); }
};

template <>
struct scalar_traits<GaussianRational> {
    static constexpr bool exact = true;
    static GaussianRational zero_like(const GaussianRational&) { return GaussianRational(Rational(0)); }
    static GaussianRational one_like(const GaussianRational&) { return GaussianRational(Rational(1)); }
    static bool is_zero(const GaussianRational& v) { return v.is_zero(); }
    static GaussianRational from_ratio(const GaussianRational&, long long n, long long d) {
        return GaussianRational(Rational(n, d));
    }
    static GaussianRational conj(const GaussianRational& v) { return v.conj(); }
    static double abs_approx(const GaussianRational& v) {
        return std::hypot(v.re.to_double(), v.im.to_double());
    }
};

// ---- formatting / parsing of the two serialization scalar modes ----------

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// "p/q r/s" (imaginary part omitted when zero on output is NOT done:
/// both parts are always written so rational round trips are bit-exact).
inline std::string format_scalar(const GaussianRational& v) {
    return v.re.str() + " " + v.im.str();
}
inline std::string format_scalar(const CD& v) {
    return format_double(v.real()) + " " + format_double(v.imag());
}

inline GaussianRational parse_gaussian(const std::string& re, const std::string& im) {
    return GaussianRational(Rational::parse(re), Rational::parse(im));
}

} // namespace virgeo

#endif
