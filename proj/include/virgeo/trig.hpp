#ifndef VIRGEO_TRIG_HPP
#define VIRGEO_TRIG_HPP

#include <algorithm>
#include <vector>

#include "virgeo/error.hpp"
#include "virgeo/scalar.hpp"

namespace virgeo {

template <class C>
struct complex_unit;

template <>
struct complex_unit<CD> {
    static CD i() { return CD(0.0, 1.0); }
};
template <>
struct complex_unit<GaussianRational> {
    static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }
};

/// Trigonometric polynomial on the circle, stored by complex exponential
/// modes: p(t) = sum_{|k| <= K} m_k e^{ikt}.  All operations are exact for
/// the given coefficients (no grid, no truncation).
template <class C>
class TrigPoly {
public:
    using traits = scalar_traits<C>;

    TrigPoly() : K_(0), m_(1, C{}) {}
    explicit TrigPoly(int K) : K_(K), m_(static_cast<size_t>(2 * K + 1), C{}) {}

    static TrigPoly constant(const C& c) {
        TrigPoly p(0);
        p.set_mode(0, c);
        return p;
    }
    static TrigPoly mode_monomial(int k, const C& c) {
        TrigPoly p(std::abs(k));
        p.set_mode(k, c);
        return p;
    }
    /// cos(n t)
    static TrigPoly cosine(int n) {
        TrigPoly p(n);
        C half = traits::from_ratio(C{}, 1, 2);
        p.set_mode(n, half);
        p.set_mode(-n, half);
        return p;
    }
    /// sin(n t)
    static TrigPoly sine(int n) {
        TrigPoly p(n);
        C h = traits::from_ratio(C{}, 1, 2);
        C i = complex_unit<C>::i();
        p.set_mode(n, C{} - i * h);
        p.set_mode(-n, i * h);
        return p;
    }

    int degree() const { return K_; }

    C mode(int k) const {
        if (std::abs(k) > K_) return C{};
        return m_[static_cast<size_t>(k + K_)];
    }
    void set_mode(int k, const C& v) {
        if (std::abs(k) > K_) raise(errc::bad_input, "mode outside degree");
        m_[static_cast<size_t>(k + K_)] = v;
    }

    /// Constant Fourier coefficient: the integral against dt/(2 pi).
    C mean() const { return mode(0); }

    bool is_zero() const {
        for (const auto& c : m_)
            if (!traits::is_zero(c)) return false;
        return true;
    }

    /// Conjugate-symmetric modes == real-valued function.
    bool is_real() const {
        for (int k = 0; k <= K_; ++k)
            if (!traits::is_zero(mode(-k) - traits::conj(mode(k)))) return false;
        return true;
    }

    /// Real form accessors: p(t) = a0 + sum a_n cos nt + b_n sin nt.
    C cos_coeff(int n) const { return n == 0 ? mode(0) : mode(n) + mode(-n); }
    C sin_coeff(int n) const { return complex_unit<C>::i() * (mode(n) - mode(-n)); }

    static TrigPoly from_real_coeffs(const C& constant, const std::vector<C>& cosc,
                                     const std::vector<C>& sinc) {
        int K = static_cast<int>(std::max(cosc.size(), sinc.size()));
        TrigPoly p(K);
        p.set_mode(0, constant);
        for (size_t n = 0; n < cosc.size(); ++n) {
            TrigPoly t = cosine(static_cast<int>(n + 1));
            p.set_mode(static_cast<int>(n + 1), p.mode(static_cast<int>(n + 1)) + cosc[n] * t.mode(static_cast<int>(n + 1)));
            p.set_mode(-static_cast<int>(n + 1), p.mode(-static_cast<int>(n + 1)) + cosc[n] * t.mode(-static_cast<int>(n + 1)));
        }
        for (size_t n = 0; n < sinc.size(); ++n) {
            TrigPoly t = sine(static_cast<int>(n + 1));
            p.set_mode(static_cast<int>(n + 1), p.mode(static_cast<int>(n + 1)) + sinc[n] * t.mode(static_cast<int>(n + 1)));
            p.set_mode(-static_cast<int>(n + 1), p.mode(-static_cast<int>(n + 1)) + sinc[n] * t.mode(-static_cast<int>(n + 1)));
        }
        return p;
    }

    friend TrigPoly operator+(const TrigPoly& a, const TrigPoly& b) {
        TrigPoly r(std::max(a.K_, b.K_));
        for (int k = -r.K_; k <= r.K_; ++k) r.set_mode(k, a.mode(k) + b.mode(k));
        return r;
    }
    friend TrigPoly operator-(const TrigPoly& a, const TrigPoly& b) {
        TrigPoly r(std::max(a.K_, b.K_));
        for (int k = -r.K_; k <= r.K_; ++k) r.set_mode(k, a.mode(k) - b.mode(k));
        return r;
    }
    TrigPoly operator-() const {
        TrigPoly r = *this;
        for (auto& c : r.m_) c = -c;
        return r;
    }
    friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
        TrigPoly r(a.K_ + b.K_);
        for (int i = -a.K_; i <= a.K_; ++i) {
            C ai = a.mode(i);
            if (traits::is_zero(ai)) continue;
            for (int j = -b.K_; j <= b.K_; ++j) {
                C bj = b.mode(j);
                if (traits::is_zero(bj)) continue;
                r.set_mode(i + j, r.mode(i + j) + ai * bj);
            }
        }
        return r;
    }
    TrigPoly operator*(const C& s) const {
        TrigPoly r = *this;
        for (auto& c : r.m_) c = c * s;
        return r;
    }
    TrigPoly& operator+=(const TrigPoly& b) { *this = *this + b; return *this; }
    TrigPoly& operator-=(const TrigPoly& b) { *this = *this - b; return *this; }

    /// d/dt: mode k picks up a factor ik.
    TrigPoly derivative() const {
        TrigPoly r(K_);
        C i = complex_unit<C>::i();
        for (int k = -K_; k <= K_; ++k)
            r.set_mode(k, mode(k) * i * traits::from_ratio(C{}, k, 1));
        return r;
    }

    TrigPoly conjugated() const {
        TrigPoly r(K_);
        for (int k = -K_; k <= K_; ++k) r.set_mode(k, traits::conj(mode(-k)));
        return r;
    }

    /// Drop leading zero modes.
    TrigPoly trimmed() const {
        int K = 0;
        for (int k = 1; k <= K_; ++k)
            if (!traits::is_zero(mode(k)) || !traits::is_zero(mode(-k))) K = k;
        TrigPoly r(K);
        for (int k = -K; k <= K; ++k) r.set_mode(k, mode(k));
        return r;
    }

    /// Drop trailing modes below an absolute tolerance (fit-noise floor).
    TrigPoly trimmed(double tol) const {
        int K = 0;
        for (int k = 1; k <= K_; ++k)
            if (traits::abs_approx(mode(k)) > tol || traits::abs_approx(mode(-k)) > tol) K = k;
        TrigPoly r(K);
        for (int k = -K; k <= K; ++k) r.set_mode(k, mode(k));
        return r;
    }

    friend bool operator==(const TrigPoly& a, const TrigPoly& b) { return (a - b).is_zero(); }

private:
    int K_;
    std::vector<C> m_; // index k + K_
};

/// Evaluate at a real angle (float coefficients).
inline CD eval_at(const TrigPoly<CD>& p, double t) {
    CD w = std::polar(1.0, t);
    CD acc = p.mode(0);
    CD wp = w, wm = std::conj(w);
    for (int k = 1; k <= p.degree(); ++k) {
        acc += p.mode(k) * wp + p.mode(-k) * wm;
        wp *= w;
        wm *= std::conj(w);
    }
    return acc;
}

inline double eval_real(const TrigPoly<CD>& p, double t) { return eval_at(p, t).real(); }

} // namespace virgeo

#endif
