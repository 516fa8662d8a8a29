#ifndef VIRGEO_POLY_HPP
#define VIRGEO_POLY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "virgeo/error.hpp"
#include "virgeo/scalar.hpp"

namespace virgeo {

/// Sparse multivariate polynomial over a commutative ring R, used for the
/// symbolic coefficient rules of the Virasoro operators.  Variables are
/// indexed 0..nvars-1; what they mean (c_1..c_N, w) is the caller's business.
template <class R>
class Poly {
public:
    using Monomial = std::vector<uint16_t>;
    using term_map = std::map<Monomial, R>;

    Poly() : nvars_(0) {}
    explicit Poly(int nvars) : nvars_(nvars) {}

    static Poly constant(int nvars, R c) {
        Poly p(nvars);
        if (!scalar_traits<R>::is_zero(c))
            p.terms_.emplace(Monomial(static_cast<size_t>(nvars), 0), std::move(c));
        return p;
    }
    static Poly var(int nvars, int i, R coef = R(1)) {
        Poly p(nvars);
        Monomial m(static_cast<size_t>(nvars), 0);
        m[static_cast<size_t>(i)] = 1;
        p.terms_.emplace(std::move(m), std::move(coef));
        return p;
    }

    int nvars() const { return nvars_; }
    const term_map& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) {
            int t = 0;
            for (auto e : m) t += e;
            d = std::max(d, t);
        }
        return d;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        Poly r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }
    Poly operator-() const {
        Poly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly r(a.nvars_ ? a.nvars_ : b.nvars_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m = ma;
                for (size_t i = 0; i < m.size(); ++i) m[i] = static_cast<uint16_t>(m[i] + mb[i]);
                r.add_term_move(std::move(m), ca * cb);
            }
        return r;
    }
    /// Division is only defined by a nonzero constant (a unit of the ring of
    /// coefficients); anything else is a usage error here.
    friend Poly operator/(const Poly& a, const Poly& b) {
        if (b.terms_.size() != 1 || b.terms_.begin()->first != Monomial(b.terms_.begin()->first.size(), 0))
            raise(errc::degenerate_divisor, "polynomial division only by constants");
        const R& c = b.terms_.begin()->second;
        Poly r = a;
        for (auto& [m, v] : r.terms_) v = v / c;
        return r;
    }
    Poly& operator+=(const Poly& b) { *this = *this + b; return *this; }
    Poly& operator-=(const Poly& b) { *this = *this - b; return *this; }
    Poly& operator*=(const Poly& b) { *this = *this * b; return *this; }

    Poly scaled(const R& s) const {
        if (scalar_traits<R>::is_zero(s)) return Poly(nvars_);
        Poly r = *this;
        for (auto& [m, c] : r.terms_) c = c * s;
        return r;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return (a - b).is_zero(); }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    /// Same polynomial over a wider variable set (new variables appended).
    Poly widened(int nvars) const {
        if (nvars < nvars_) raise(errc::bad_input, "cannot shrink variable set");
        Poly r(nvars);
        for (const auto& [m, c] : terms_) {
            Monomial mm(static_cast<size_t>(nvars), 0);
            for (size_t i = 0; i < m.size(); ++i) mm[i] = m[i];
            r.terms_.emplace(std::move(mm), c);
        }
        return r;
    }

    Poly derivative(int var) const {
        Poly r(nvars_);
        for (const auto& [m, c] : terms_) {
            uint16_t e = m[static_cast<size_t>(var)];
            if (e == 0) continue;
            Monomial mm = m;
            mm[static_cast<size_t>(var)] = static_cast<uint16_t>(e - 1);
            r.add_term_move(std::move(mm), c * scalar_traits<R>::from_ratio(c, e, 1));
        }
        return r;
    }

    /// Evaluate with values from another ring U via the coefficient converter.
    template <class U, class Conv>
    U eval(const std::vector<U>& vals, Conv conv) const {
        U acc = U{};
        for (const auto& [m, c] : terms_) {
            U t = conv(c);
            for (size_t i = 0; i < m.size(); ++i)
                for (uint16_t e = 0; e < m[i]; ++e) t = t * vals[i];
            acc = acc + t;
        }
        return acc;
    }

    double max_abs_coeff() const {
        double mx = 0.0;
        for (const auto& [m, c] : terms_) mx = std::max(mx, scalar_traits<R>::abs_approx(c));
        return mx;
    }

    /// Human-readable form with the given variable names.
    std::string str(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [m, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += coeff_str(c);
            for (size_t i = 0; i < m.size(); ++i) {
                if (m[i] == 0) continue;
                out += "*" + names[i];
                if (m[i] > 1) out += "^" + std::to_string(m[i]);
            }
        }
        return out;
    }

private:
    static std::string coeff_str(const Rational& c) { return c.str(); }
    static std::string coeff_str(const GaussianRational& c) {
        return "(" + c.re.str() + (c.im.is_negative() ? "" : "+") + c.im.str() + "i)";
    }

    void add_term(const Monomial& m, R c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!scalar_traits<R>::is_zero(c)) terms_.emplace(m, std::move(c));
        } else {
            it->second += c;
            if (scalar_traits<R>::is_zero(it->second)) terms_.erase(it);
        }
    }
    void add_term_move(Monomial&& m, R c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!scalar_traits<R>::is_zero(c)) terms_.emplace(std::move(m), std::move(c));
        } else {
            it->second += c;
            if (scalar_traits<R>::is_zero(it->second)) terms_.erase(it);
        }
    }

    int nvars_;
    term_map terms_;
};

template <class R>
struct scalar_traits<Poly<R>> {
    static constexpr bool exact = scalar_traits<R>::exact;
    static Poly<R> zero_like(const Poly<R>& p) { return Poly<R>(p.nvars()); }
    static Poly<R> one_like(const Poly<R>& p) {
        return Poly<R>::constant(p.nvars(), scalar_traits<R>::one_like(R{}));
    }
    static bool is_zero(const Poly<R>& v) { return v.is_zero(); }
    static Poly<R> from_ratio(const Poly<R>& p, long long n, long long d) {
        return Poly<R>::constant(p.nvars(), scalar_traits<R>::from_ratio(R{}, n, d));
    }
    static Poly<R> conj(const Poly<R>& v) { return v; }
    static double abs_approx(const Poly<R>& v) { return v.max_abs_coeff(); }
};

} // namespace virgeo

#endif
