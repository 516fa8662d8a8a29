#ifndef VIRGEO_UNIVALENT_HPP
#define VIRGEO_UNIVALENT_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "virgeo/diffeo.hpp"
#include "virgeo/poly.hpp"
#include "virgeo/series.hpp"

namespace virgeo {

/// Point of the space S of normalized univalent functions, stored through its
/// Taylor coefficients: f(z) = z + c_1 z^2 + ... + c_N z^{N+1}.  The point is
/// the exact polynomial data; operations treat higher coefficients as zero.
template <class C>
struct UnivalentPoint {
    std::vector<C> c;

    UnivalentPoint() = default;
    explicit UnivalentPoint(std::vector<C> coeffs) : c(std::move(coeffs)) {}
    static UnivalentPoint identity(int n) { return UnivalentPoint(std::vector<C>(static_cast<size_t>(n), C{})); }

    int truncation() const { return static_cast<int>(c.size()); }
    C coeff(int k) const { // c_k, 1-based
        if (k < 1 || k > truncation()) raise(errc::bad_input, "coefficient index out of range");
        return c[static_cast<size_t>(k - 1)];
    }
};

/// Koebe-family point z / (1 - e^{i theta} z)^2: c_k = (k+1) e^{i k theta}.
inline UnivalentPoint<CD> koebe_point(double theta, int n) {
    std::vector<CD> c(static_cast<size_t>(n));
    for (int k = 1; k <= n; ++k)
        c[static_cast<size_t>(k - 1)] = static_cast<double>(k + 1) * std::polar(1.0, k * theta);
    return UnivalentPoint<CD>(std::move(c));
}

/// Exact Koebe point at theta = 0 (c_k = k+1) for rational-mode checks.
template <class C>
UnivalentPoint<C> koebe_point_exact(int n) {
    std::vector<C> c(static_cast<size_t>(n));
    for (int k = 1; k <= n; ++k) c[static_cast<size_t>(k - 1)] = scalar_traits<C>::from_ratio(C{}, k + 1, 1);
    return UnivalentPoint<C>(std::move(c));
}

// --------------------------------------------------------------------------
// The residue oracle for the infinitesimal action.
//
// For a single mode field e_p the variation of f at the point with
// coefficients c is assembled from circle-integral residues:
//   delta f(z) = sum_{m >= 0} rho_m f(z)^{m+2},
//   rho_m = [w^{m+1-p}] (f'(w) / Y(w))^2 Y(w)^{-(m+1)},  Y(w) = f(w)/w,
// and the lifted fiber component (used by the deformation space) is
//   delta w = sum_{m=0..-p} eta_m w^{m+1},
//   eta_m = [w^{-p-m}] (f'(w) / Y(w))^2 Y(w)^m.
// Everything is plain truncated-series arithmetic over the coefficient ring,
// so the same code produces numeric tangents (complex scalars) and symbolic
// operator rules (polynomial scalars).
// --------------------------------------------------------------------------

template <class R>
struct ModeAction {
    std::vector<R> dc;     // delta c_k at index k-1
    std::vector<R> dwpow;  // delta w = sum dwpow[m] w^{m+1}
};

template <class R>
ModeAction<R> mode_action(const std::vector<R>& c, int p, const R& proto) {
    using T = scalar_traits<R>;
    using Ser = TruncatedSeries<R>;
    int n = static_cast<int>(c.size());
    int neg = std::max(0, -p);
    int m_w = n + neg + 1; // w-side truncation

    Ser y = Ser::zero(0, m_w, proto);
    Ser fp = Ser::zero(0, m_w, proto);
    y.set(0, T::one_like(proto));
    fp.set(0, T::one_like(proto));
    for (int k = 1; k <= n; ++k) {
        y.set(k, c[static_cast<size_t>(k - 1)]);
        fp.set(k, c[static_cast<size_t>(k - 1)] * T::from_ratio(proto, k + 1, 1));
    }
    Ser yinv = y.inverse();
    Ser u = fp * yinv;
    u = u * u; // (f'/Y)^2

    // z-side: powers of f(z) = z Y(z)
    Ser fz = y.truncated(n).shifted(1);
    std::vector<Ser> fpow; // fpow[m] = f(z)^{m+2}, truncated to z^{n+1}
    Ser acc = (fz * fz).truncated(n + 1);
    fpow.push_back(acc);
    for (int m = 1; m <= n - 1; ++m) {
        acc = (acc * fz).truncated(n + 1);
        fpow.push_back(acc);
    }

    Ser total = Ser::zero(1, n + 1, proto);
    Ser ypow = yinv; // Y^{-(m+1)}
    for (int m = 0; m <= n - 1; ++m) {
        Ser t = u * ypow;
        int idx = m + 1 - p;
        if (idx >= 0 && idx <= t.order()) {
            R rho = t.coeff(idx);
            if (!T::is_zero(rho)) total += fpow[static_cast<size_t>(m)] * rho;
        }
        if (m < n - 1) ypow = (ypow * yinv).truncated(m_w);
    }

    ModeAction<R> out;
    out.dc.reserve(static_cast<size_t>(n));
    for (int k = 1; k <= n; ++k) out.dc.push_back(total.order() >= k + 1 ? total.coeff(k + 1) : T::zero_like(proto));

    if (p <= 0) {
        Ser ypos = Ser::monomial(T::one_like(proto), 0, m_w); // Y^m
        for (int m = 0; m <= -p; ++m) {
            Ser t = u * ypos;
            int idx = -p - m;
            out.dwpow.push_back(idx <= t.order() ? t.coeff(idx) : T::zero_like(proto));
            if (m < -p) ypos = (ypos * y).truncated(m_w);
        }
    }
    return out;
}

// --------------------------------------------------------------------------
// symbolic operator rules
// --------------------------------------------------------------------------

using QPoly = Poly<Rational>;

/// Differential-operator presentation of the mode-p action on the coordinate
/// ring: the partial-derivative coefficient for each c_k, plus the fiber
/// component as a polynomial list in powers of w (empty for the base space).
struct LpOperator {
    int p = 0;
    int truncation = 0;             // variable universe c_1..c_N
    std::vector<QPoly> dc;          // index k-1; valid for k <= truncation - max(0,-p)
    std::vector<QPoly> dwpow;       // delta w = sum dwpow[m] w^{m+1}; empty on the base

    int valid_components() const { return static_cast<int>(dc.size()); }

    /// Derivation applied to a polynomial in the c-variables (nvars == truncation).
    QPoly apply_c(const QPoly& q) const {
        QPoly r(q.nvars());
        for (int k = 1; k <= static_cast<int>(dc.size()) && k <= q.nvars(); ++k) {
            QPoly d = q.derivative(k - 1);
            if (!d.is_zero()) r += dc[static_cast<size_t>(k - 1)] * d;
        }
        return r;
    }
};

namespace detail {
inline std::vector<QPoly> generic_point(int n) {
    std::vector<QPoly> c;
    c.reserve(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) c.push_back(QPoly::var(n, k, Rational(1)));
    return c;
}
} // namespace detail

/// Oracle-derived operator rules at truncation N (with fiber part when
/// `with_fiber`): exact rational polynomials.
inline LpOperator lp_operator(int p, int n, bool with_fiber = false) {
    std::vector<QPoly> c = detail::generic_point(n);
    ModeAction<QPoly> act = mode_action(c, p, QPoly(n));
    LpOperator op;
    op.p = p;
    op.truncation = n;
    int valid = n - std::max(0, -p);
    op.dc.assign(act.dc.begin(), act.dc.begin() + std::max(0, valid));
    if (with_fiber) op.dwpow = std::move(act.dwpow);
    return op;
}

/// Commutator of two operators as derivations on the coordinate ring:
/// component k of [A, B] is A(B_k) - B(A_k).
inline LpOperator op_commutator(const LpOperator& a, const LpOperator& b) {
    LpOperator r;
    r.p = a.p + b.p;
    r.truncation = a.truncation;
    int valid = std::min(a.valid_components(), b.valid_components());
    valid = std::min(valid, a.truncation - std::max(0, -a.p) - std::max(0, -b.p));
    for (int k = 1; k <= valid; ++k) {
        QPoly bk = b.dc[static_cast<size_t>(k - 1)];
        QPoly ak = a.dc[static_cast<size_t>(k - 1)];
        r.dc.push_back(a.apply_c(bk) - b.apply_c(ak));
    }
    return r;
}

/// Largest coefficient magnitude of [L_m, L_n] - (m - n) L_{m+n} applied to
/// every coordinate functional within the shared validity range.  Exactly
/// zero in rational arithmetic.
inline double commutator_residual(int m, int n, int trunc) {
    LpOperator lm = lp_operator(m, trunc);
    LpOperator ln = lp_operator(n, trunc);
    LpOperator lmn = lp_operator(m + n, trunc);
    LpOperator comm = op_commutator(lm, ln);
    double worst = 0.0;
    int valid = std::min({comm.valid_components(), lmn.valid_components(),
                          std::max(0, trunc - std::abs(m) - std::abs(n))});
    for (int k = 1; k <= valid; ++k) {
        QPoly res = comm.dc[static_cast<size_t>(k - 1)] -
                    lmn.dc[static_cast<size_t>(k - 1)].scaled(Rational(m - n));
        worst = std::max(worst, res.max_abs_coeff());
    }
    return worst;
}

/// L_{-p} for p >= 3 built from the iterated ad of L_{-1} on L_{-2}:
/// ad^{p-2}(L_{-1}) L_{-2} / (p-2)!.  Independent of the residue route.
inline LpOperator lp_operator_ad(int p, int trunc) {
    if (p >= -2) raise(errc::bad_input, "ad construction applies to p <= -3");
    LpOperator lm1 = lp_operator(-1, trunc);
    LpOperator acc = lp_operator(-2, trunc);
    long long fact = 1;
    for (int j = 1; j <= -p - 2; ++j) {
        acc = op_commutator(lm1, acc);
        fact *= j;
    }
    for (auto& q : acc.dc) q = q / QPoly::constant(trunc, Rational(fact));
    return acc;
}

// --------------------------------------------------------------------------
// numeric action, flows, the Koebe disk family
// --------------------------------------------------------------------------

/// Tangent vector delta-c of the field v at the point x, by the residue
/// formula; exact for trigonometric-polynomial v and the polynomial point.
inline std::vector<CD> lv_action(const FourierField<CD>& v, const UnivalentPoint<CD>& x) {
    int n = x.truncation();
    std::vector<CD> out(static_cast<size_t>(n), CD(0.0));
    for (int k = -v.coef.degree(); k <= v.coef.degree(); ++k) {
        CD a = v.coef.mode(k) / CD(0.0, 1.0); // e-basis coefficient of mode k
        if (a == CD(0.0)) continue;
        ModeAction<CD> act = mode_action(x.c, k, CD(0.0));
        for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] += a * act.dc[static_cast<size_t>(i)];
    }
    return out;
}

/// Evaluate an operator's symbolic rules at a numeric point.
inline std::vector<CD> apply_rules(const LpOperator& op, const UnivalentPoint<CD>& x) {
    std::vector<CD> vals;
    vals.reserve(x.c.size());
    for (const auto& v : x.c) vals.push_back(v);
    std::vector<CD> out;
    out.reserve(op.dc.size());
    for (const auto& rule : op.dc)
        out.push_back(rule.eval(vals, [](const Rational& r) { return CD(r.to_double(), 0.0); }));
    return out;
}

/// RK4 flow of the field action on S.
inline UnivalentPoint<CD> flow_on_S(const FourierField<CD>& v, double time,
                                    const UnivalentPoint<CD>& x, int steps = 0) {
    double speed = 0.0;
    for (int k = -v.coef.degree(); k <= v.coef.degree(); ++k) speed += std::abs(v.coef.mode(k));
    if (std::abs(time) * speed > 16.0)
        raise(errc::flow_unstable, "time * field norm beyond the stability bound");
    if (steps <= 0) steps = std::max(64, static_cast<int>(std::ceil(64.0 * std::abs(time) * (1.0 + speed))));
    double h = time / steps;
    UnivalentPoint<CD> cur = x;
    auto axpy = [](const UnivalentPoint<CD>& base, double s, const std::vector<CD>& d) {
        UnivalentPoint<CD> r = base;
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += s * d[i];
        return r;
    };
    for (int s = 0; s < steps; ++s) {
        std::vector<CD> k1 = lv_action(v, cur);
        std::vector<CD> k2 = lv_action(v, axpy(cur, 0.5 * h, k1));
        std::vector<CD> k3 = lv_action(v, axpy(cur, 0.5 * h, k2));
        std::vector<CD> k4 = lv_action(v, axpy(cur, h, k3));
        for (size_t i = 0; i < cur.c.size(); ++i)
            cur.c[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return cur;
}

/// Polynomial functional with real-part extraction: value = Re(poly(c)).
using CFunctional = Poly<CD>;

inline double functional_value(const CFunctional& f, const UnivalentPoint<CD>& x) {
    std::vector<CD> vals;
    vals.reserve(x.c.size());
    for (const auto& v : x.c) vals.push_back(v);
    return f.eval(vals, [](const CD& z) { return z; }).real();
}

/// Mean value over the Koebe analytic disk {z / (1 - a z)^2 : |a| = r}:
/// returns (value at the center a = 0, quadrature average over the circle).
inline std::pair<double, double> poisson_average(const CFunctional& f, double r, int quad_points,
                                                 int n) {
    if (!(r > 0.0 && r < 1.0)) raise(errc::bad_input, "radius must lie in (0,1)");
    double center = functional_value(f, UnivalentPoint<CD>::identity(n));
    double acc = 0.0;
    for (int j = 0; j < quad_points; ++j) {
        double tau = 2.0 * std::numbers::pi * j / quad_points;
        acc += functional_value(f, [&] {
            UnivalentPoint<CD> p = UnivalentPoint<CD>::identity(n);
            CD a = std::polar(r, tau), ap = a;
            for (int k = 1; k <= n; ++k) {
                p.c[static_cast<size_t>(k - 1)] = static_cast<double>(k + 1) * ap;
                ap *= a;
            }
            return p;
        }());
    }
    return {center, acc / quad_points};
}

// --------------------------------------------------------------------------
// mirrors, the absolute, Maslov index
// --------------------------------------------------------------------------

inline double angle_mod_tau(double a) {
    const double tau = 2.0 * std::numbers::pi;
    double r = std::fmod(a, tau);
    if (r < 0) r += tau;
    return r;
}

/// Orientation of a triple of distinct points of the absolute: +1 when
/// (a, b, c) is cyclically ordered like the standard circle, -1 otherwise.
inline int maslov_index(double a, double b, double c, double tol = 1e-12) {
    double beta = angle_mod_tau(b - a);
    double gamma = angle_mod_tau(c - a);
    if (beta < tol || gamma < tol || std::abs(beta - gamma) < tol)
        raise(errc::degenerate_triple, "absolute points must be pairwise distinct");
    return beta < gamma ? +1 : -1;
}

/// Oriented mirror: an involutive orientation-reversing circle map together
/// with a fixed point on the absolute.
struct OrientedMirror {
    CircleDiffeo s;
    double absolute = 0.0;

    OrientedMirror(CircleDiffeo refl, double a, double tol = 1e-8)
        : s(std::move(refl)), absolute(a) {
        if (s.orientation() != -1) raise(errc::bad_input, "mirror map must reverse orientation");
        if (involution_residual(s) > tol) raise(errc::bad_input, "mirror map must be involutive");
        double fix = std::abs(circle_distance(s(a), a));
        if (fix > tol) raise(errc::bad_input, "absolute point must be fixed by the mirror");
    }

    /// The rotation conjugate r_theta s_- r_theta^{-1}: t -> 2 theta - t.
    static OrientedMirror at(double theta) {
        return OrientedMirror(CircleDiffeo::reflection(theta), theta);
    }

    static double circle_distance(double x, double y) {
        double d = angle_mod_tau(x - y);
        return std::min(d, 2.0 * std::numbers::pi - d);
    }

    static double involution_residual(const CircleDiffeo& s) {
        double m = 0.0;
        int g = s.grid();
        for (int j = 0; j < g; ++j) {
            double t = 2.0 * std::numbers::pi * j / g;
            m = std::max(m, circle_distance(s(s(t)), t));
        }
        return m;
    }
};

/// Two mirrors are parallel when they pass through the same absolute point.
inline bool mirror_parallel(const OrientedMirror& a, const OrientedMirror& b, double tol = 1e-9) {
    return OrientedMirror::circle_distance(a.absolute, b.absolute) < tol;
}

/// Sup-norm residual of s . s = id on the grid (diagnostic, not an error).
inline double subsymmetry_involution_check(const CircleDiffeo& s) {
    return OrientedMirror::involution_residual(s);
}

// --------------------------------------------------------------------------
// serialization: `spoint N` then one coefficient per line
// --------------------------------------------------------------------------

inline void write_point(std::ostream& os, const UnivalentPoint<CD>& x) {
    os << "spoint " << x.truncation() << "\n";
    for (const auto& v : x.c) os << format_scalar(v) << "\n";
}

inline UnivalentPoint<CD> read_point(std::istream& is) {
    std::string tag;
    int n;
    if (!(is >> tag) || tag != "spoint") raise(errc::bad_input, "expected 'spoint' header");
    if (!(is >> n) || n < 0) raise(errc::bad_input, "malformed point header");
    std::vector<CD> c(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
        double re, im;
        if (!(is >> re >> im)) raise(errc::bad_input, "missing point coefficient");
        c[static_cast<size_t>(k)] = CD(re, im);
    }
    return UnivalentPoint<CD>(std::move(c));
}

} // namespace virgeo

#endif
