#ifndef VIRGEO_SERIES_HPP
#define VIRGEO_SERIES_HPP

#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "virgeo/error.hpp"
#include "virgeo/scalar.hpp"

namespace virgeo {

/// Truncated formal power / Laurent series over a commutative scalar ring S.
///
/// A series stores exact coefficients for every degree in [low(), order()];
/// nothing is claimed about higher degrees.  Every operation returns the
/// truncation order through which its result is guaranteed coefficientwise
/// correct, so precision never degrades silently.  With an exact scalar
/// (GaussianRational, Rational, Poly) no rounding ever happens.
template <class S>
class TruncatedSeries {
public:
    using scalar_type = S;
    using traits = scalar_traits<S>;

    TruncatedSeries() : low_(0), coeffs_{S{}} {}

    TruncatedSeries(int low, std::vector<S> coeffs)
        : low_(low), coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) raise(errc::bad_input, "series needs at least one coefficient");
    }

    /// Zero series guaranteed through degree n, coefficients shaped like proto.
    static TruncatedSeries zero(int low, int n, const S& proto) {
        if (n < low) raise(errc::bad_input, "series truncation below low degree");
        return TruncatedSeries(low, std::vector<S>(static_cast<size_t>(n - low + 1),
                                                   traits::zero_like(proto)));
    }
    static TruncatedSeries zero(int low, int n) { return zero(low, n, S{}); }

    /// c * z^k, guaranteed through degree n.
    static TruncatedSeries monomial(const S& c, int k, int n) {
        TruncatedSeries r = zero(std::min(k, 0), n, c);
        r.set(k, c);
        return r;
    }
    static TruncatedSeries identity(int n, const S& proto) {
        return monomial(traits::one_like(proto), 1, n);
    }
    static TruncatedSeries constant(const S& c, int n) { return monomial(c, 0, n); }

    int low() const { return low_; }
    int order() const { return low_ + static_cast<int>(coeffs_.size()) - 1; }

    S coeff(int k) const {
        if (k > order()) raise(errc::truncation_insufficient, "coefficient beyond truncation order");
        if (k < low_) return traits::zero_like(proto());
        return coeffs_[static_cast<size_t>(k - low_)];
    }

    void set(int k, const S& v) {
        if (k < low_ || k > order()) raise(errc::bad_input, "set outside series range");
        coeffs_[static_cast<size_t>(k - low_)] = v;
    }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!traits::is_zero(c)) return false;
        return true;
    }

    /// Lowest degree with a nonzero coefficient; order()+1 when all stored
    /// coefficients vanish.
    int effective_low() const {
        for (int k = low_; k <= order(); ++k)
            if (!traits::is_zero(coeffs_[static_cast<size_t>(k - low_)])) return k;
        return order() + 1;
    }

    const S& proto() const { return coeffs_.front(); }

    /// Restrict to truncation order n (n <= order()).
    TruncatedSeries truncated(int n) const {
        if (n > order()) raise(errc::truncation_insufficient, "cannot extend truncation");
        if (n < low_) return zero(n, n, proto());
        return TruncatedSeries(low_, std::vector<S>(coeffs_.begin(),
                                                    coeffs_.begin() + (n - low_ + 1)));
    }

    /// Multiply by z^k (exact re-indexing).
    TruncatedSeries shifted(int k) const {
        TruncatedSeries r = *this;
        r.low_ += k;
        return r;
    }

    /// Drop leading stored-zero coefficients (keeps at least one slot).
    TruncatedSeries stripped() const {
        int m = std::min(effective_low(), order());
        return TruncatedSeries(m, std::vector<S>(coeffs_.begin() + (m - low_), coeffs_.end()));
    }

    /// Sum; a series that is identically zero is an exact zero and does not
    /// limit the validity of the result.
    friend TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
        bool az = a.is_zero(), bz = b.is_zero();
        if (bz && !az) return a;
        if (az && !bz) return b;
        if (az && bz) return zero(std::min(a.low_, b.low_), std::max(a.order(), b.order()), a.proto());
        int n = std::min(a.order(), b.order());
        int low = std::min(a.low_, b.low_);
        if (n < low) raise(errc::truncation_insufficient, "series sum has empty valid range");
        TruncatedSeries r = zero(low, n, a.proto());
        for (int k = low; k <= n; ++k) {
            S v = traits::zero_like(a.proto());
            bool set_any = false;
            if (k >= a.low_ && k <= a.order()) {
                v = a.coeffs_[static_cast<size_t>(k - a.low_)];
                set_any = true;
            }
            if (k >= b.low_ && k <= b.order()) {
                const S& bv = b.coeffs_[static_cast<size_t>(k - b.low_)];
                v = set_any ? S(v + bv) : bv;
            }
            r.set(k, v);
        }
        return r;
    }
    friend TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
        return a + (-b);
    }
    TruncatedSeries operator-() const {
        TruncatedSeries r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    /// Product; valid through min(Na + lb, Nb + la).  An identically zero
    /// factor gives an exact zero.
    friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
        int low = a.low_ + b.low_;
        int n = std::min(a.order() + b.low_, b.order() + a.low_);
        if (a.is_zero() || b.is_zero())
            return zero(low, std::max(a.order() + b.low_, b.order() + a.low_), a.proto());
        TruncatedSeries r = zero(low, n, a.proto());
        for (int i = a.low_; i <= a.order(); ++i) {
            const S& ai = a.coeffs_[static_cast<size_t>(i - a.low_)];
            if (traits::is_zero(ai)) continue;
            int jmax = std::min(b.order(), n - i);
            for (int j = b.low_; j <= jmax; ++j) {
                const S& bj = b.coeffs_[static_cast<size_t>(j - b.low_)];
                if (traits::is_zero(bj)) continue;
                r.coeffs_[static_cast<size_t>(i + j - low)] += ai * bj;
            }
        }
        return r;
    }

    TruncatedSeries operator*(const S& s) const {
        TruncatedSeries r = *this;
        for (auto& c : r.coeffs_) c = c * s;
        return r;
    }
    TruncatedSeries operator/(const S& s) const {
        TruncatedSeries r = *this;
        for (auto& c : r.coeffs_) c = c / s;
        return r;
    }
    TruncatedSeries& operator+=(const TruncatedSeries& b) { *this = *this + b; return *this; }
    TruncatedSeries& operator-=(const TruncatedSeries& b) { *this = *this - b; return *this; }
    TruncatedSeries& operator*=(const TruncatedSeries& b) { *this = *this * b; return *this; }

    /// Reciprocal of a series whose lowest nonzero coefficient is a unit.
    TruncatedSeries inverse() const {
        int m = effective_low();
        if (m > order()) raise(errc::degenerate_divisor, "reciprocal of zero series");
        int nb = order() - m; // unit part known through degree nb
        const S& u0 = coeffs_[static_cast<size_t>(m - low_)];
        // v = 1/unit-part, solved order by order from unit * v = 1
        std::vector<S> u(coeffs_.begin() + (m - low_), coeffs_.end());
        std::vector<S> v(u.size(), traits::zero_like(u0));
        S one = traits::one_like(u0);
        v[0] = one / u0;
        for (int k = 1; k <= nb; ++k) {
            S acc = traits::zero_like(u0);
            for (int j = 1; j <= k; ++j) acc += u[static_cast<size_t>(j)] * v[static_cast<size_t>(k - j)];
            v[static_cast<size_t>(k)] = -acc / u0;
        }
        return TruncatedSeries(-m, std::move(v));
    }

    /// Division; precondition: b's leading stored coefficient block is not all
    /// zero.  Valid through min(Na, Nb - mb + la) - mb.
    friend TruncatedSeries operator/(const TruncatedSeries& a, const TruncatedSeries& b) {
        if (b.is_zero()) raise(errc::degenerate_divisor, "division by zero series");
        return a * b.inverse();
    }

    S eval(const S& z) const {
        // Horner on the power part; negative powers via explicit division.
        S acc = traits::zero_like(proto());
        for (int k = order(); k >= std::max(low_, 0); --k)
            acc = acc * z + coeffs_[static_cast<size_t>(k - low_)];
        if (low_ < 0) {
            S zi = traits::one_like(proto()) / z;
            S zp = zi;
            for (int k = -1; k >= low_; --k, zp = zp * zi)
                acc += coeffs_[static_cast<size_t>(k - low_)] * zp;
        }
        return acc;
    }

    friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
        int low = std::min(a.low_, b.low_);
        int n = std::min(a.order(), b.order());
        for (int k = low; k <= n; ++k) {
            S va = (k >= a.low_ && k <= a.order()) ? a.coeffs_[static_cast<size_t>(k - a.low_)]
                                                   : traits::zero_like(a.proto());
            S vb = (k >= b.low_ && k <= b.order()) ? b.coeffs_[static_cast<size_t>(k - b.low_)]
                                                   : traits::zero_like(b.proto());
            if (!traits::is_zero(va - vb)) return false;
        }
        return true;
    }

private:
    int low_;
    std::vector<S> coeffs_;
};

// --------------------------------------------------------------------------
// calculus
// --------------------------------------------------------------------------

template <class S>
TruncatedSeries<S> derivative(const TruncatedSeries<S>& f) {
    using T = scalar_traits<S>;
    int low = f.low() - 1;
    int n = f.order() - 1;
    TruncatedSeries<S> r = TruncatedSeries<S>::zero(low, n, f.proto());
    for (int k = f.low(); k <= f.order(); ++k) {
        if (k == 0) continue;
        r.set(k - 1, f.coeff(k) * T::from_ratio(f.proto(), k, 1));
    }
    return r;
}

/// Antiderivative with zero constant term; the z^{-1} coefficient must vanish.
template <class S>
TruncatedSeries<S> antiderivative(const TruncatedSeries<S>& f) {
    using T = scalar_traits<S>;
    if (f.low() <= -1 && f.order() >= -1 && !T::is_zero(f.coeff(-1)))
        raise(errc::logarithmic_term, "antiderivative of series with nonzero residue");
    int low = f.low() + 1;
    int n = f.order() + 1;
    TruncatedSeries<S> r = TruncatedSeries<S>::zero(std::min(low, 0), n, f.proto());
    for (int k = f.low(); k <= f.order(); ++k) {
        if (k == -1) continue;
        r.set(k + 1, f.coeff(k) * T::from_ratio(f.proto(), 1, k + 1));
    }
    return r;
}

template <class S>
S residue(const TruncatedSeries<S>& f) {
    if (f.low() > -1 || f.order() < -1) return scalar_traits<S>::zero_like(f.proto());
    return f.coeff(-1);
}

// --------------------------------------------------------------------------
// composition and reversion
// --------------------------------------------------------------------------

/// f(g) for g with g(0) = 0 (effective low of g >= 1).  Laurent f is allowed;
/// negative powers of g are expanded through the reciprocal.
template <class S>
TruncatedSeries<S> compose(const TruncatedSeries<S>& f, const TruncatedSeries<S>& g) {
    using T = scalar_traits<S>;
    int m = g.effective_low();
    if (m < 1) raise(errc::composition_domain, "inner series must vanish at 0");
    if (m > g.order()) raise(errc::composition_domain, "inner series is zero");
    int n = std::min(m * (f.order() + 1) - 1, g.order());
    if (n < 0) n = 0;
    TruncatedSeries<S> acc = TruncatedSeries<S>::zero(0, n, f.proto());
    TruncatedSeries<S> gt = g.stripped().truncated(std::min(g.order(), n));
    // Horner over the power part of f, down to the constant term
    for (int k = f.order(); k >= 0; --k) {
        acc = (acc * gt).truncated(std::min(n, acc.order() + gt.low()));
        S fk = k >= f.low() ? f.coeff(k) : T::zero_like(f.proto());
        if (!T::is_zero(fk)) acc += TruncatedSeries<S>::constant(fk, n);
    }
    if (f.low() < 0) {
        TruncatedSeries<S> gi = gt.inverse();
        TruncatedSeries<S> gp = gi;
        for (int k = -1; k >= f.low(); --k) {
            if (!T::is_zero(f.coeff(k))) acc += gp * f.coeff(k);
            if (k > f.low()) gp = gp * gi;
        }
    }
    return acc.truncated(std::min(acc.order(), n));
}

/// Compositional inverse of f with f(0) = 0, f'(0) a unit: returns g with
/// f(g) = g(f) = id through the common truncation order.
template <class S>
TruncatedSeries<S> reverse(const TruncatedSeries<S>& f) {
    using T = scalar_traits<S>;
    if (f.effective_low() != 1)
        raise(errc::not_invertible, "reversion needs f(0)=0 and f'(0) != 0");
    int n = f.order();
    const S one = T::one_like(f.proto());
    TruncatedSeries<S> id = TruncatedSeries<S>::identity(n, f.proto());
    // Newton: g <- g - (f(g) - id) / f'(g), quadratic order growth.
    TruncatedSeries<S> g = TruncatedSeries<S>::monomial(one / f.coeff(1), 1, 1);
    TruncatedSeries<S> fp = derivative(f);
    int have = 1;
    while (have < n) {
        have = std::min(2 * have + 1, n);
        TruncatedSeries<S> gx = TruncatedSeries<S>::zero(0, have, f.proto());
        for (int k = 1; k <= g.order() && k <= have; ++k) gx.set(k, g.coeff(k));
        TruncatedSeries<S> err = compose(f.truncated(std::min(n, have + 1)), gx) - id.truncated(have);
        // err vanishes through the previously converged order; stripping the
        // structural zeros keeps the quotient's validity at `have`
        TruncatedSeries<S> corr =
            err.stripped() / compose(fp.truncated(std::min(fp.order(), have)), gx);
        g = (gx - corr).truncated(have);
    }
    return g;
}

// --------------------------------------------------------------------------
// elementary transcendental operations
// --------------------------------------------------------------------------

/// log of a series with constant term exactly one.
template <class S>
TruncatedSeries<S> series_log(const TruncatedSeries<S>& f) {
    using T = scalar_traits<S>;
    if (f.effective_low() != 0 || !T::is_zero(f.coeff(0) - T::one_like(f.proto())))
        raise(errc::branch_point, "series log needs constant term 1");
    return antiderivative(derivative(f) / f).truncated(f.order());
}

/// exp of a series with zero constant term.
template <class S>
TruncatedSeries<S> series_exp(const TruncatedSeries<S>& f) {
    using T = scalar_traits<S>;
    if (f.low() < 0 && f.effective_low() < 0)
        raise(errc::branch_point, "series exp of Laurent tail");
    if (f.low() <= 0 && f.order() >= 0 && !T::is_zero(f.coeff(0)))
        raise(errc::branch_point, "series exp needs zero constant term");
    int n = f.order();
    // y' = f' y, y(0) = 1, solved order by order.
    std::vector<S> y(static_cast<size_t>(n + 1), T::zero_like(f.proto()));
    y[0] = T::one_like(f.proto());
    for (int k = 1; k <= n; ++k) {
        S acc = T::zero_like(f.proto());
        for (int j = 1; j <= k; ++j) {
            if (j > f.order()) break;
            if (j >= std::max(f.low(), 1))
                acc += f.coeff(j) * T::from_ratio(f.proto(), j, 1) * y[static_cast<size_t>(k - j)];
        }
        y[static_cast<size_t>(k)] = acc * T::from_ratio(f.proto(), 1, k);
    }
    return TruncatedSeries<S>(0, std::move(y));
}

/// Integer power (negative exponents through the reciprocal).
template <class S>
TruncatedSeries<S> series_pow(const TruncatedSeries<S>& f, long long e) {
    using T = scalar_traits<S>;
    if (e == 0) return TruncatedSeries<S>::constant(T::one_like(f.proto()), f.order());
    TruncatedSeries<S> base = e > 0 ? f : f.inverse();
    long long k = e > 0 ? e : -e;
    TruncatedSeries<S> acc = base;
    for (long long i = 1; i < k; ++i) acc = acc * base;
    return acc;
}

/// f^r for rational exponent r; requires constant term one.
template <class S>
TruncatedSeries<S> series_pow(const TruncatedSeries<S>& f, long long num, long long den) {
    using T = scalar_traits<S>;
    TruncatedSeries<S> lg = series_log(f);
    return series_exp(lg * T::from_ratio(f.proto(), num, den));
}

// --------------------------------------------------------------------------
// nesting: a TruncatedSeries is itself a valid scalar (bivariate expansions
// are series-in-z with series-in-w coefficients)
// --------------------------------------------------------------------------

template <class S>
struct scalar_traits<TruncatedSeries<S>> {
    static constexpr bool exact = scalar_traits<S>::exact;
    static TruncatedSeries<S> zero_like(const TruncatedSeries<S>& p) {
        return TruncatedSeries<S>::zero(p.low(), p.order(), p.proto());
    }
    static TruncatedSeries<S> one_like(const TruncatedSeries<S>& p) {
        return TruncatedSeries<S>::monomial(scalar_traits<S>::one_like(p.proto()), 0,
                                            std::max(p.order(), 0));
    }
    static bool is_zero(const TruncatedSeries<S>& v) { return v.is_zero(); }
    static TruncatedSeries<S> from_ratio(const TruncatedSeries<S>& p, long long n, long long d) {
        return TruncatedSeries<S>::monomial(scalar_traits<S>::from_ratio(p.proto(), n, d), 0,
                                            std::max(p.order(), 0));
    }
    static TruncatedSeries<S> conj(const TruncatedSeries<S>& v) {
        TruncatedSeries<S> r = v;
        for (int k = v.low(); k <= v.order(); ++k)
            r.set(k, scalar_traits<S>::conj(v.coeff(k)));
        return r;
    }
    static double abs_approx(const TruncatedSeries<S>& v) {
        double m = 0.0;
        for (int k = v.low(); k <= v.order(); ++k)
            m = std::max(m, scalar_traits<S>::abs_approx(v.coeff(k)));
        return m;
    }
};

// --------------------------------------------------------------------------
// serialization: line-oriented text, bit-exact round trip in rational mode
// --------------------------------------------------------------------------

inline void write_series(std::ostream& os, const TruncatedSeries<GaussianRational>& f) {
    os << "series " << f.low() << " " << f.order() << " rational\n";
    for (int k = f.low(); k <= f.order(); ++k) os << format_scalar(f.coeff(k)) << "\n";
}
inline void write_series(std::ostream& os, const TruncatedSeries<CD>& f) {
    os << "series " << f.low() << " " << f.order() << " float\n";
    for (int k = f.low(); k <= f.order(); ++k) os << format_scalar(f.coeff(k)) << "\n";
}

namespace detail {
inline void read_series_header(std::istream& is, int& low, int& n, std::string& mode) {
    std::string tag;
    if (!(is >> tag) || tag != "series") raise(errc::bad_input, "expected 'series' header");
    if (!(is >> low >> n >> mode)) raise(errc::bad_input, "malformed series header");
    if (n < low) raise(errc::bad_input, "series header has order < low degree");
}
} // namespace detail

inline TruncatedSeries<GaussianRational> read_series_rational(std::istream& is) {
    int low, n;
    std::string mode;
    detail::read_series_header(is, low, n, mode);
    if (mode != "rational") raise(errc::bad_input, "expected rational series");
    std::vector<GaussianRational> c;
    for (int k = low; k <= n; ++k) {
        std::string re, im;
        if (!(is >> re)) raise(errc::bad_input, "missing series coefficient");
        if (!(is >> im)) im = "0";
        c.push_back(parse_gaussian(re, im));
    }
    return TruncatedSeries<GaussianRational>(low, std::move(c));
}

inline TruncatedSeries<CD> read_series_float(std::istream& is) {
    int low, n;
    std::string mode;
    detail::read_series_header(is, low, n, mode);
    if (mode != "float") raise(errc::bad_input, "expected float series");
    std::vector<CD> c;
    for (int k = low; k <= n; ++k) {
        double re, im;
        if (!(is >> re >> im)) raise(errc::bad_input, "missing series coefficient");
        c.emplace_back(re, im);
    }
    return TruncatedSeries<CD>(low, std::move(c));
}

} // namespace virgeo

#endif
