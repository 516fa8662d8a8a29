#ifndef VIRGEO_VIRASORO_HPP
#define VIRGEO_VIRASORO_HPP

#include <map>

#include "virgeo/trig.hpp"

namespace virgeo {

/// Vector field on the circle, v(t) d/dt, with trigonometric-polynomial
/// coefficient function.  Houses u, v and the basis fields e_k, s_n, c_n, h.
template <class C>
struct FourierField {
    TrigPoly<C> coef; // the coefficient function v(t)

    FourierField() = default;
    explicit FourierField(TrigPoly<C> c) : coef(std::move(c)) {}

    /// e_k = i e^{ikt} d/dt
    static FourierField e(int k) {
        return FourierField(TrigPoly<C>::mode_monomial(k, complex_unit<C>::i()));
    }
    /// s_n = sin(nt) d/dt
    static FourierField s(int n) { return FourierField(TrigPoly<C>::sine(n)); }
    /// c_n = cos(nt) d/dt
    static FourierField c(int n) { return FourierField(TrigPoly<C>::cosine(n)); }
    /// h = d/dt
    static FourierField h() {
        return FourierField(TrigPoly<C>::constant(scalar_traits<C>::one_like(C{})));
    }

    friend FourierField operator+(const FourierField& a, const FourierField& b) {
        return FourierField(a.coef + b.coef);
    }
    friend FourierField operator-(const FourierField& a, const FourierField& b) {
        return FourierField(a.coef - b.coef);
    }
    FourierField operator*(const C& s) const { return FourierField(coef * s); }
    bool is_zero() const { return coef.is_zero(); }
};

/// Commutator of vector fields, [u, v] = (u v' - u' v) d/dt.  Exact for
/// trigonometric-polynomial inputs.
template <class C>
FourierField<C> vect_bracket(const FourierField<C>& u, const FourierField<C>& v) {
    return FourierField<C>(u.coef * v.coef.derivative() - u.coef.derivative() * v.coef);
}

/// Gelfand-Fuchs 2-cocycle of the fields u, v computed exactly from Fourier
/// coefficients.  Circle integrals throughout the library are reported in
/// units of 2*pi (the mean of the integrand), which keeps exact mode inside
/// the Gaussian rationals; zeros, ratios and cocycle identities do not see
/// the normalization.
template <class C>
C gelfand_fuchs(const FourierField<C>& u, const FourierField<C>& v) {
    return (v.coef.derivative() * u.coef.derivative().derivative()).mean();
}

// --------------------------------------------------------------------------
// Witt / Virasoro vectors in the complex mode basis
// --------------------------------------------------------------------------

/// Finitely supported combination of the basis vectors e_k.
template <class C>
struct WittVector {
    std::map<int, C> modes;

    static WittVector e(int k, C coef = C(1)) {
        WittVector w;
        w.modes.emplace(k, std::move(coef));
        return w;
    }

    C coeff(int k) const {
        auto it = modes.find(k);
        return it == modes.end() ? C{} : it->second;
    }
    void add(int k, const C& v) {
        auto it = modes.find(k);
        if (it == modes.end()) {
            if (!scalar_traits<C>::is_zero(v)) modes.emplace(k, v);
        } else {
            it->second += v;
            if (scalar_traits<C>::is_zero(it->second)) modes.erase(it);
        }
    }
    bool is_zero() const { return modes.empty(); }

    friend WittVector operator+(const WittVector& a, const WittVector& b) {
        WittVector r = a;
        for (const auto& [k, v] : b.modes) r.add(k, v);
        return r;
    }
    friend WittVector operator-(const WittVector& a, const WittVector& b) {
        WittVector r = a;
        for (const auto& [k, v] : b.modes) r.add(k, -v);
        return r;
    }
    WittVector operator*(const C& s) const {
        WittVector r;
        for (const auto& [k, v] : modes) r.add(k, v * s);
        return r;
    }
};

/// [e_j, e_k] = (j - k) e_{j+k}, extended bilinearly.
template <class C>
WittVector<C> witt_bracket(const WittVector<C>& x, const WittVector<C>& y) {
    WittVector<C> r;
    for (const auto& [j, a] : x.modes)
        for (const auto& [k, b] : y.modes)
            r.add(j + k, a * b * scalar_traits<C>::from_ratio(C{}, j - k, 1));
    return r;
}

/// Witt vector plus central coefficient.
template <class C>
struct VirasoroVector {
    WittVector<C> witt;
    C central{};

    static VirasoroVector e(int k, C coef = C(1)) {
        return {WittVector<C>::e(k, std::move(coef)), C{}};
    }
    static VirasoroVector c(C coef = C(1)) { return {WittVector<C>{}, std::move(coef)}; }

    bool is_zero() const { return witt.is_zero() && scalar_traits<C>::is_zero(central); }

    friend VirasoroVector operator+(const VirasoroVector& a, const VirasoroVector& b) {
        return {a.witt + b.witt, a.central + b.central};
    }
    friend VirasoroVector operator-(const VirasoroVector& a, const VirasoroVector& b) {
        return {a.witt - b.witt, a.central - b.central};
    }
};

/// [e_j, e_k] = (j - k) e_{j+k} + delta(j+k) (j^3 - j)/12 c, with c central.
template <class C>
VirasoroVector<C> virasoro_bracket(const VirasoroVector<C>& x, const VirasoroVector<C>& y) {
    using T = scalar_traits<C>;
    VirasoroVector<C> r;
    r.witt = witt_bracket(x.witt, y.witt);
    r.central = C{};
    for (const auto& [j, a] : x.witt.modes) {
        C b = y.witt.coeff(-j);
        if (T::is_zero(b)) continue;
        long long jj = j;
        r.central += a * b * T::from_ratio(C{}, jj * jj * jj - jj, 12);
    }
    return r;
}

/// [x,[y,z]] + [y,[z,x]] + [z,[x,y]]; identically zero, and exactly zero in
/// rational mode.
template <class C>
VirasoroVector<C> jacobi_residual(const VirasoroVector<C>& x, const VirasoroVector<C>& y,
                                  const VirasoroVector<C>& z) {
    return virasoro_bracket(x, virasoro_bracket(y, z)) +
           virasoro_bracket(y, virasoro_bracket(z, x)) +
           virasoro_bracket(z, virasoro_bracket(x, y));
}

// --------------------------------------------------------------------------
// basis dictionary e_k <-> i e^{ikt} d/dt and the real basis {s_n, c_n, h}
// --------------------------------------------------------------------------

template <class C>
FourierField<C> field_from_witt(const WittVector<C>& w) {
    int K = 0;
    for (const auto& [k, v] : w.modes) K = std::max(K, std::abs(k));
    TrigPoly<C> p(K);
    C i = complex_unit<C>::i();
    for (const auto& [k, v] : w.modes) p.set_mode(k, i * v);
    return FourierField<C>(p);
}

template <class C>
WittVector<C> witt_from_field(const FourierField<C>& f) {
    WittVector<C> w;
    C i = complex_unit<C>::i();
    for (int k = -f.coef.degree(); k <= f.coef.degree(); ++k)
        w.add(k, f.coef.mode(k) / i);
    return w;
}

/// Real-basis presentation: x = h_coef * h + sum sin_modes[n] s_n + cos_modes[n] c_n.
/// c_0 is identified with h (cos(0 t) d/dt = d/dt).
template <class C>
struct RealWittVector {
    std::map<int, C> sin_modes;
    std::map<int, C> cos_modes;
    C h_coef{};

    FourierField<C> to_field() const {
        FourierField<C> f(TrigPoly<C>::constant(h_coef));
        for (const auto& [n, v] : sin_modes) f = f + FourierField<C>::s(n) * v;
        for (const auto& [n, v] : cos_modes) f = f + FourierField<C>::c(n) * v;
        return f;
    }

    static RealWittVector from_field(const FourierField<C>& f) {
        RealWittVector r;
        r.h_coef = f.coef.mean();
        for (int n = 1; n <= f.coef.degree(); ++n) {
            C a = f.coef.cos_coeff(n);
            C b = f.coef.sin_coeff(n);
            if (!scalar_traits<C>::is_zero(a)) r.cos_modes.emplace(n, a);
            if (!scalar_traits<C>::is_zero(b)) r.sin_modes.emplace(n, b);
        }
        return r;
    }
};

template <class C>
WittVector<C> witt_from_real(const RealWittVector<C>& r) {
    return witt_from_field(r.to_field());
}
template <class C>
RealWittVector<C> real_from_witt(const WittVector<C>& w) {
    return RealWittVector<C>::from_field(field_from_witt(w));
}

} // namespace virgeo

#endif
