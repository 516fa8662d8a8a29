#ifndef VIRGEO_DEFORMATION_HPP
#define VIRGEO_DEFORMATION_HPP

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "virgeo/univalent.hpp"

namespace virgeo {

/// Point of the universal deformation space: a base point f of S together
/// with a fiber coordinate w, subject to w != 0 and 1/w outside f(D).
template <class C>
struct DeformationPoint {
    UnivalentPoint<C> base;
    C w{};
};

/// Winding number of the curve f(r e^{it}) - q about 0, sampled on the grid.
inline int image_winding(const UnivalentPoint<CD>& x, CD q, double radius, int samples = 1024) {
    double acc = 0.0;
    CD prev;
    for (int j = 0; j <= samples; ++j) {
        double t = 2.0 * std::numbers::pi * j / samples;
        CD z = std::polar(radius, t);
        CD fz = z, zp = z;
        for (int k = 1; k <= x.truncation(); ++k) {
            zp *= z;
            fz += x.coeff(k) * zp;
        }
        CD cur = fz - q;
        if (j > 0) acc += std::arg(cur / prev);
        prev = cur;
    }
    return static_cast<int>(std::lround(acc / (2.0 * std::numbers::pi)));
}

/// Validity of (f, w): w nonzero and 1/w not enclosed by the image of the
/// circle |z| = 1 - delta (argument-principle sampling check).  delta must
/// leave the polynomial tail small at the test radius; the default suits
/// coefficients growing no faster than the de Branges bound at N <= 32.
inline bool deformation_point_valid(const DeformationPoint<CD>& x, double delta = 0.25,
                                    int samples = 1024) {
    if (std::abs(x.w) == 0.0) return false;
    return image_winding(x.base, CD(1.0) / x.w, 1.0 - delta, samples) == 0;
}

// --------------------------------------------------------------------------
// lifted operators
// --------------------------------------------------------------------------

/// Operator rules lifted to the deformation space.  The c-components equal
/// the base rules (projection equivariance at the symbolic level); the fiber
/// component is the polynomial sum dwpow[m] w^{m+1}.
inline LpOperator lp_operator_def(int p, int n) { return lp_operator(p, n, true); }

/// The fiber rule as a polynomial in the extended variable set
/// (c_1..c_N, w), with w the last variable.
inline QPoly fiber_rule_poly(const LpOperator& op) {
    int nv = op.truncation + 1;
    QPoly r(nv);
    QPoly w = QPoly::var(nv, nv - 1, Rational(1));
    QPoly wpow = w;
    for (size_t m = 0; m < op.dwpow.size(); ++m) {
        r += op.dwpow[m].widened(nv) * wpow;
        wpow *= w;
    }
    return r;
}

/// Derivation of the lifted operator applied to a polynomial in (c, w).
inline QPoly apply_lifted(const LpOperator& op, const QPoly& q) {
    int nv = op.truncation + 1;
    QPoly r(nv);
    for (int k = 1; k <= op.valid_components(); ++k) {
        QPoly d = q.derivative(k - 1);
        if (!d.is_zero()) r += op.dc[static_cast<size_t>(k - 1)].widened(nv) * d;
    }
    QPoly dw = q.derivative(nv - 1);
    if (!dw.is_zero()) r += fiber_rule_poly(op) * dw;
    return r;
}

/// Residual of [L_m, L_n] = (m - n) L_{m+n} on both the coordinate
/// functionals c_k and the fiber coordinate w; exactly zero in rational mode
/// (the lifted action is by plain vector fields, no central term).
inline double commutator_residual_def(int m, int n, int trunc) {
    LpOperator a = lp_operator_def(m, trunc);
    LpOperator b = lp_operator_def(n, trunc);
    LpOperator ab = lp_operator_def(m + n, trunc);
    int nv = trunc + 1;
    double worst = 0.0;
    int valid = std::min({a.valid_components(), b.valid_components(), ab.valid_components(),
                          std::max(0, trunc - std::abs(m) - std::abs(n))});
    for (int k = 1; k <= valid; ++k) {
        QPoly ck = QPoly::var(nv, k - 1, Rational(1));
        QPoly res = apply_lifted(a, apply_lifted(b, ck)) - apply_lifted(b, apply_lifted(a, ck)) -
                    apply_lifted(ab, ck).scaled(Rational(m - n));
        worst = std::max(worst, res.max_abs_coeff());
    }
    QPoly wvar = QPoly::var(nv, nv - 1, Rational(1));
    QPoly resw = apply_lifted(a, apply_lifted(b, wvar)) - apply_lifted(b, apply_lifted(a, wvar)) -
                 apply_lifted(ab, wvar).scaled(Rational(m - n));
    worst = std::max(worst, resw.max_abs_coeff());
    return worst;
}

/// Numeric tangent (delta c, delta w) of the field v at the point x.
inline std::pair<std::vector<CD>, CD> lv_action_def(const FourierField<CD>& v,
                                                    const DeformationPoint<CD>& x) {
    int n = x.base.truncation();
    std::vector<CD> dc(static_cast<size_t>(n), CD(0.0));
    CD dw(0.0);
    for (int k = -v.coef.degree(); k <= v.coef.degree(); ++k) {
        CD a = v.coef.mode(k) / CD(0.0, 1.0);
        if (a == CD(0.0)) continue;
        ModeAction<CD> act = mode_action(x.base.c, k, CD(0.0));
        for (int i = 0; i < n; ++i) dc[static_cast<size_t>(i)] += a * act.dc[static_cast<size_t>(i)];
        CD wp = x.w;
        for (size_t m = 0; m < act.dwpow.size(); ++m) {
            dw += a * act.dwpow[m] * wp;
            wp *= x.w;
        }
    }
    return {std::move(dc), dw};
}

/// Bundle projection (f, w) -> f.
template <class C>
UnivalentPoint<C> project(const DeformationPoint<C>& x) {
    return x.base;
}

// --------------------------------------------------------------------------
// subsymmetries
// --------------------------------------------------------------------------

/// Mirror angle of a rotation-conjugate reflection t -> 2 theta - t; rejects
/// maps outside that family.
inline double reflection_angle(const CircleDiffeo& s, double tol = 1e-9) {
    if (s.orientation() != -1)
        raise(errc::unsupported_subsymmetry, "subsymmetry must reverse orientation");
    const TrigPoly<CD>& p = s.periodic_part();
    for (int k = 1; k <= p.degree(); ++k)
        if (std::abs(p.mode(k)) > tol || std::abs(p.mode(-k)) > tol)
            raise(errc::unsupported_subsymmetry,
                  "only rotation conjugates of the standard reflection are supported");
    return 0.5 * p.mode(0).real();
}

/// Antiholomorphic extension of the mirror subsymmetry to the deformation
/// space: the standard reflection acts by (f(z), w) -> (conj f(conj z), conj w),
/// i.e. coefficientwise conjugation; rotation conjugates act through the
/// rotation action c_k -> e^{ik theta} c_k, w -> e^{i theta} w.
inline DeformationPoint<CD> subsymmetry_extend(double theta, const DeformationPoint<CD>& x) {
    DeformationPoint<CD> r = x;
    int n = x.base.truncation();
    for (int k = 1; k <= n; ++k)
        r.base.c[static_cast<size_t>(k - 1)] =
            std::polar(1.0, 2.0 * k * theta) * std::conj(x.base.c[static_cast<size_t>(k - 1)]);
    r.w = std::polar(1.0, 2.0 * theta) * std::conj(x.w);
    return r;
}

inline DeformationPoint<CD> subsymmetry_extend(const OrientedMirror& s,
                                               const DeformationPoint<CD>& x) {
    return subsymmetry_extend(reflection_angle(s.s), x);
}

inline double point_distance(const DeformationPoint<CD>& a, const DeformationPoint<CD>& b) {
    double m = std::abs(a.w - b.w);
    for (int k = 1; k <= a.base.truncation(); ++k)
        m = std::max(m, std::abs(a.base.coeff(k) - b.base.coeff(k)));
    return m;
}

/// Axioms of a subsymmetric space on the implemented mirror family:
/// (i) each subsymmetry fixes the points of its own mirror locus,
/// (ii) s_x s_y s_x = s_{s_x y}, checked both as circle maps and as the
/// extended maps on sampled points.  Returns the largest deviation.
inline double subsymmetric_axiom_check(const std::vector<DeformationPoint<CD>>& points,
                                       const std::vector<double>& thetas) {
    double worst = 0.0;
    // (i) mirror points (theta-rotated real locus) are fixed
    for (double th : thetas) {
        for (const auto& x : points) {
            // move x onto the theta-mirror locus, then test fixedness
            DeformationPoint<CD> onmirror = x;
            int n = x.base.truncation();
            for (int k = 1; k <= n; ++k)
                onmirror.base.c[static_cast<size_t>(k - 1)] =
                    std::polar(1.0, k * th) * CD(x.base.coeff(k).real(), 0.0);
            onmirror.w = std::polar(1.0, th) * CD(x.w.real() == 0.0 ? 0.5 : x.w.real(), 0.0);
            worst = std::max(worst, point_distance(subsymmetry_extend(th, onmirror), onmirror));
        }
    }
    // (ii) the braid relation on points and on the mirror parameters
    for (double a : thetas)
        for (double b : thetas) {
            double composed = 2.0 * a - b; // angle of s_a s_b s_a
            for (const auto& x : points) {
                DeformationPoint<CD> lhs =
                    subsymmetry_extend(a, subsymmetry_extend(b, subsymmetry_extend(a, x)));
                DeformationPoint<CD> rhs = subsymmetry_extend(composed, x);
                worst = std::max(worst, point_distance(lhs, rhs));
            }
            // as circle maps
            CircleDiffeo sa = CircleDiffeo::reflection(a);
            CircleDiffeo sb = CircleDiffeo::reflection(b);
            CircleDiffeo lhs_map = diffeo_compose(sa, diffeo_compose(sb, sa));
            CircleDiffeo rhs_map = CircleDiffeo::reflection(composed);
            for (int j = 0; j < 256; ++j) {
                double t = 2.0 * std::numbers::pi * j / 256;
                worst = std::max(worst, OrientedMirror::circle_distance(lhs_map(t), rhs_map(t)));
            }
        }
    return worst;
}

// --------------------------------------------------------------------------
// boundary limit
// --------------------------------------------------------------------------

/// Functional on the deformation space: polynomial in (c_1..c_N, w) with
/// real-part extraction.
inline double functional_value_def(const Poly<CD>& f, const DeformationPoint<CD>& x) {
    std::vector<CD> vals;
    vals.reserve(x.base.c.size() + 1);
    for (const auto& v : x.base.c) vals.push_back(v);
    vals.push_back(x.w);
    return f.eval(vals, [](const CD& z) { return z; }).real();
}

/// Boundary value of a functional at an oriented mirror of the Koebe-
/// accessible family: F is evaluated along the radial approach
/// f_rho = koebe((1 - eps) e^{i theta}), w = (1 - eps) e^{i theta} with a
/// geometric sequence of eps, and the limit is Richardson-extrapolated.
inline double boundary_limit(const Poly<CD>& f, const OrientedMirror& mirror, int n = 12,
                             double eps0 = 0.2, double ratio = 0.5, int stages = 8) {
    double theta = mirror.absolute;
    std::vector<double> eps(static_cast<size_t>(stages)), val(static_cast<size_t>(stages));
    for (int j = 0; j < stages; ++j) {
        double e = eps0 * std::pow(ratio, j);
        CD a = std::polar(1.0 - e, theta);
        DeformationPoint<CD> x;
        x.base = UnivalentPoint<CD>::identity(n);
        CD ap = a;
        for (int k = 1; k <= n; ++k) {
            x.base.c[static_cast<size_t>(k - 1)] = static_cast<double>(k + 1) * ap;
            ap *= a;
        }
        x.w = std::polar(1.0 - e, theta);
        eps[static_cast<size_t>(j)] = e;
        val[static_cast<size_t>(j)] = functional_value_def(f, x);
    }
    // Neville extrapolation to eps = 0
    std::vector<double> tab = val;
    for (int lvl = 1; lvl < stages; ++lvl)
        for (int j = stages - 1; j >= lvl; --j) {
            double e_hi = eps[static_cast<size_t>(j - lvl)], e_lo = eps[static_cast<size_t>(j)];
            tab[static_cast<size_t>(j)] =
                tab[static_cast<size_t>(j)] +
                e_lo * (tab[static_cast<size_t>(j)] - tab[static_cast<size_t>(j - 1)]) / (e_hi - e_lo);
        }
    double limit = tab[static_cast<size_t>(stages - 1)];
    double resid = std::abs(limit - tab[static_cast<size_t>(stages - 2)]);
    double scale = std::max(1.0, std::abs(limit));
    if (!(resid < 1e-6 * scale))
        raise(errc::limit_diverged, "extrapolation did not settle");
    return limit;
}

// --------------------------------------------------------------------------
// serialization: `apoint N`, coefficients, then `w re im`
// --------------------------------------------------------------------------

inline void write_deformation_point(std::ostream& os, const DeformationPoint<CD>& x) {
    os << "apoint " << x.base.truncation() << "\n";
    for (const auto& v : x.base.c) os << format_scalar(v) << "\n";
    os << "w " << format_scalar(x.w) << "\n";
}

inline DeformationPoint<CD> read_deformation_point(std::istream& is) {
    std::string tag;
    int n;
    if (!(is >> tag) || tag != "apoint") raise(errc::bad_input, "expected 'apoint' header");
    if (!(is >> n) || n < 0) raise(errc::bad_input, "malformed point header");
    DeformationPoint<CD> x;
    x.base = UnivalentPoint<CD>::identity(n);
    for (int k = 0; k < n; ++k) {
        double re, im;
        if (!(is >> re >> im)) raise(errc::bad_input, "missing point coefficient");
        x.base.c[static_cast<size_t>(k)] = CD(re, im);
    }
    if (!(is >> tag) || tag != "w") raise(errc::bad_input, "expected 'w' line");
    double re, im;
    if (!(is >> re >> im)) raise(errc::bad_input, "missing fiber coordinate");
    x.w = CD(re, im);
    return x;
}

} // namespace virgeo

#endif
