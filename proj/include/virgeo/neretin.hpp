#ifndef VIRGEO_NERETIN_HPP
#define VIRGEO_NERETIN_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "virgeo/diffeo.hpp"
#include "virgeo/matrix.hpp"
#include "virgeo/series.hpp"

namespace virgeo {

struct NeretinConfig {
    int K = 32;            // Fourier/Laurent truncation of element data
    double tol = 1e-10;    // welding residual tolerance
    int max_iter = 60;
    int seam_grid = 512;   // sampling for seam residuals
    int curve_samples = 256; // boundary validity sampling
};

/// Semigroup element as a pair of boundary-parametrized analytic maps:
/// pplus is a Taylor series on the closed unit disk, pminus a Laurent map
/// normalized to z + sum_{k>=1} b_k z^{-k} at infinity (the Moebius gauge of
/// the pair).  The two boundary curves must be disjoint, with the pminus
/// curve enclosing the pplus curve.
class NeretinElement {
public:
    NeretinElement(TruncatedSeries<CD> pplus, TruncatedSeries<CD> pminus,
                   NeretinConfig cfg = NeretinConfig{}, bool validate_curves = true)
        : pplus_(std::move(pplus)), pminus_(std::move(pminus)), cfg_(cfg) {
        if (validate_curves) validate();
    }

    /// The scaling element A(t): (e^{-t} z, z); t > 0.
    static NeretinElement scaling(double t, NeretinConfig cfg = NeretinConfig{}) {
        if (!(t > 0.0)) raise(errc::not_contracting, "scaling needs t > 0");
        TruncatedSeries<CD> plus = TruncatedSeries<CD>::zero(0, cfg.K);
        plus.set(1, CD(std::exp(-t), 0.0));
        TruncatedSeries<CD> minus = TruncatedSeries<CD>::zero(-cfg.K, 1);
        minus.set(1, CD(1.0, 0.0));
        return NeretinElement(std::move(plus), std::move(minus), cfg);
    }

    /// Degenerate neutral pair (z, z); the disjointness check is waived.
    static NeretinElement neutral(NeretinConfig cfg = NeretinConfig{}) {
        TruncatedSeries<CD> plus = TruncatedSeries<CD>::zero(0, cfg.K);
        plus.set(1, CD(1.0, 0.0));
        TruncatedSeries<CD> minus = TruncatedSeries<CD>::zero(-cfg.K, 1);
        minus.set(1, CD(1.0, 0.0));
        return NeretinElement(std::move(plus), std::move(minus), cfg, false);
    }

    /// A(t) with low-harmonic perturbations on both boundary maps; the test
    /// family of the near-identity regime.
    static NeretinElement perturbed_scaling(double t, const std::vector<CD>& plus_eps,
                                            const std::vector<CD>& minus_eps,
                                            NeretinConfig cfg = NeretinConfig{}) {
        if (!(t > 0.0)) raise(errc::not_contracting, "scaling needs t > 0");
        TruncatedSeries<CD> plus = TruncatedSeries<CD>::zero(0, cfg.K);
        plus.set(1, CD(std::exp(-t), 0.0));
        for (size_t j = 0; j < plus_eps.size(); ++j)
            plus.set(static_cast<int>(j + 2), std::exp(-t) * plus_eps[j]);
        TruncatedSeries<CD> minus = TruncatedSeries<CD>::zero(-cfg.K, 1);
        minus.set(1, CD(1.0, 0.0));
        for (size_t j = 0; j < minus_eps.size(); ++j) minus.set(-static_cast<int>(j + 1), minus_eps[j]);
        return NeretinElement(std::move(plus), std::move(minus), cfg);
    }

    const TruncatedSeries<CD>& pplus() const { return pplus_; }
    const TruncatedSeries<CD>& pminus() const { return pminus_; }
    const NeretinConfig& config() const { return cfg_; }

    CD eval_plus(CD z) const { return pplus_.eval(z); }
    CD eval_minus(CD z) const { return pminus_.eval(z); }

    /// Sampling validity check: both boundary curves immersed Jordan-like
    /// loops winding once around the origin region, mutually disjoint, with
    /// the pplus curve strictly inside the pminus curve.
    void validate() const {
        int s = cfg_.curve_samples;
        std::vector<CD> cp(static_cast<size_t>(s)), cm(static_cast<size_t>(s));
        for (int j = 0; j < s; ++j) {
            CD z = std::polar(1.0, 2.0 * std::numbers::pi * j / s);
            cp[static_cast<size_t>(j)] = pplus_.eval(z);
            cm[static_cast<size_t>(j)] = pminus_.eval(z);
        }
        if (winding(cp, pplus_.eval(CD(0.0))) != 1)
            raise(errc::not_jordan, "pplus boundary fails the winding check");
        if (winding(cm, pplus_.eval(CD(0.0))) != 1)
            raise(errc::not_jordan, "pminus boundary must enclose the pplus disk");
        double dmin = 1e300;
        for (int i = 0; i < s; ++i)
            for (int j = 0; j < s; ++j)
                dmin = std::min(dmin, std::abs(cp[static_cast<size_t>(i)] - cm[static_cast<size_t>(j)]));
        if (!(dmin > 0.0)) raise(errc::not_jordan, "boundary curves intersect");
    }

    static int winding(const std::vector<CD>& curve, CD about) {
        double acc = 0.0;
        for (size_t j = 0; j < curve.size(); ++j) {
            CD a = curve[j] - about;
            CD b = curve[(j + 1) % curve.size()] - about;
            acc += std::arg(b / a);
        }
        return static_cast<int>(std::lround(acc / (2.0 * std::numbers::pi)));
    }

private:
    TruncatedSeries<CD> pplus_;
    TruncatedSeries<CD> pminus_;
    NeretinConfig cfg_;
};

namespace detail {

/// Damped Newton solve of series(u) = target from the given start; steps
/// that increase the defect are halved so analytic inversions converge from
/// any start inside the basin's neighborhood.
inline CD series_invert_point(const TruncatedSeries<CD>& f, const TruncatedSeries<CD>& fprime,
                              CD target, CD start) {
    CD u = start;
    double fn = std::abs(f.eval(u) - target);
    for (int it = 0; it < 60; ++it) {
        if (fn < 1e-13) return u;
        CD d = fprime.eval(u);
        if (std::abs(d) < 1e-14) raise(errc::gauge_singular, "vanishing derivative in point inversion");
        CD step = (f.eval(u) - target) / d;
        double damp = 1.0;
        for (int half = 0; half < 12; ++half) {
            CD un = u - damp * step;
            double fnn = std::abs(f.eval(un) - target);
            if (fnn < fn) {
                u = un;
                fn = fnn;
                break;
            }
            damp *= 0.5;
            if (half == 11) raise(errc::welding_diverged, "point inversion stalled");
        }
    }
    raise(errc::welding_diverged, "boundary point inversion did not converge");
}

} // namespace detail

/// Result of a welding solve, with the per-iteration residual history the
/// CLI can emit as diagnostics.
struct WeldingReport {
    std::vector<double> residuals;
    int iterations = 0;
};

/// Transition maps of a welding across the seam  q-side(left) ~ p-side(right):
/// Phi1 is holomorphic inside the left factor's outer boundary curve, Phi2
/// outside the right factor's inner curve with the Moebius gauge
/// Phi2(eta) = eta + sum_{k>=1} gamma_k eta^{-k}.  The seam condition
/// Phi1(p1-(e^{it})) = Phi2(p2+(e^{it})) is Fourier-matched on the seam grid
/// by damped Newton with a finite-difference Jacobian (the system is linear
/// in the coefficients, so the Jacobian is frozen after the first build).
/// Every series here is evaluated strictly inside its region of analyticity.
struct WeldingMaps {
    TruncatedSeries<CD> phi1;  // Taylor, degrees 0..K
    TruncatedSeries<CD> phi2;  // eta + sum gamma_k eta^{-k}, degrees -K..1
};

inline WeldingMaps weld_transition(const std::vector<CD>& left_minus,
                                   const std::vector<CD>& right_plus, const NeretinConfig& cfg,
                                   WeldingReport* report = nullptr) {
    int K = cfg.K;
    int g = static_cast<int>(left_minus.size());
    int nunk = 2 * K + 1; // phi_0..phi_K, gamma_1..gamma_K
    // geometric scaling of the unknown columns keeps the system conditioned
    double la = 0.0, lb = 0.0;
    for (const auto& v : left_minus) la += std::log(std::abs(v));
    for (const auto& v : right_plus) lb += std::log(std::abs(v));
    double rho_a = std::exp(la / g), rho_b = std::exp(lb / g);

    auto mismatch = [&](const std::vector<CD>& x) {
        std::vector<CD> m(static_cast<size_t>(g));
        for (int j = 0; j < g; ++j) {
            CD a = left_minus[static_cast<size_t>(j)] / rho_a;
            CD b = right_plus[static_cast<size_t>(j)] / rho_b;
            CD lhs = 0.0, ap = CD(1.0);
            for (int k = 0; k <= K; ++k) {
                lhs += x[static_cast<size_t>(k)] * ap;
                ap *= a;
            }
            CD rhs = right_plus[static_cast<size_t>(j)], bp = CD(1.0) / b;
            for (int k = 1; k <= K; ++k) {
                rhs += x[static_cast<size_t>(K + k)] * bp;
                bp /= b;
            }
            m[static_cast<size_t>(j)] = lhs - rhs;
        }
        std::vector<CD> modes(static_cast<size_t>(nunk));
        for (int k = -K; k <= K; ++k) {
            CD acc = 0.0;
            for (int j = 0; j < g; ++j)
                acc += m[static_cast<size_t>(j)] *
                       std::polar(1.0, -2.0 * std::numbers::pi * k * j / g);
            modes[static_cast<size_t>(k + K)] = acc / static_cast<double>(g);
        }
        return modes;
    };
    auto norm_inf = [](const std::vector<CD>& v) {
        double m = 0.0;
        for (const auto& c : v) m = std::max(m, std::abs(c));
        return m;
    };

    std::vector<CD> x(static_cast<size_t>(nunk), CD(0.0));
    x[1] = rho_b / rho_a * CD(1.0); // circle-to-circle initial guess
    std::vector<CD> r = mismatch(x);
    double rn = norm_inf(r);
    WeldingReport rep;
    rep.residuals.push_back(rn);

    CMatrix jac(0, 0);
    bool have_jac = false;
    int it = 0;
    for (; it < cfg.max_iter && rn > cfg.tol; ++it) {
        if (!have_jac) {
            jac = CMatrix(nunk, nunk);
            const double h = 1e-6;
            for (int c = 0; c < nunk; ++c) {
                std::vector<CD> xp = x;
                xp[static_cast<size_t>(c)] += h;
                std::vector<CD> rp = mismatch(xp);
                for (int rr = 0; rr < nunk; ++rr)
                    jac(rr, c) = (rp[static_cast<size_t>(rr)] - r[static_cast<size_t>(rr)]) / h;
            }
            have_jac = true;
        }
        std::vector<CD> step = solve_linear(jac, r);
        double damp = 1.0;
        std::vector<CD> xn;
        std::vector<CD> rnew;
        double rn_new = rn;
        for (int half = 0; half < 8; ++half) {
            xn = x;
            for (int c = 0; c < nunk; ++c) xn[static_cast<size_t>(c)] -= damp * step[static_cast<size_t>(c)];
            rnew = mismatch(xn);
            rn_new = norm_inf(rnew);
            if (rn_new < rn) break;
            damp *= 0.5;
        }
        if (!(rn_new < rn)) {
            if (rn < 64.0 * cfg.tol) break; // settled at the attainable floor
            rep.iterations = it;
            if (report) *report = rep;
            raise(errc::welding_diverged, "seam residual stopped decreasing");
        }
        x = std::move(xn);
        r = std::move(rnew);
        rn = rn_new;
        rep.residuals.push_back(rn);
    }
    rep.iterations = it;
    if (report) *report = rep;
    if (rn > 64.0 * cfg.tol) raise(errc::welding_diverged, "welding did not reach tolerance");

    WeldingMaps maps;
    maps.phi1 = TruncatedSeries<CD>::zero(0, K);
    for (int k = 0; k <= K; ++k) maps.phi1.set(k, x[static_cast<size_t>(k)] / std::pow(rho_a, k));
    maps.phi2 = TruncatedSeries<CD>::zero(-K, 1);
    maps.phi2.set(1, CD(1.0, 0.0));
    for (int k = 1; k <= K; ++k)
        maps.phi2.set(-k, x[static_cast<size_t>(K + k)] * std::pow(rho_b, k));
    return maps;
}

/// Boundary samples of an element pair on the unit circle.
inline void boundary_samples(const NeretinElement& g, int n, std::vector<CD>& plus,
                             std::vector<CD>& minus) {
    plus.resize(static_cast<size_t>(n));
    minus.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        CD z = std::polar(1.0, 2.0 * std::numbers::pi * j / n);
        plus[static_cast<size_t>(j)] = g.eval_plus(z);
        minus[static_cast<size_t>(j)] = g.eval_minus(z);
    }
}

namespace detail {
/// Taylor/Laurent coefficients (degrees lo..hi) of a sampled analytic loop.
inline TruncatedSeries<CD> dft_series(const std::vector<CD>& samples, int lo, int hi) {
    int g = static_cast<int>(samples.size());
    TruncatedSeries<CD> out = TruncatedSeries<CD>::zero(lo, hi);
    for (int k = lo; k <= hi; ++k) {
        CD acc = 0.0;
        for (int j = 0; j < g; ++j)
            acc += samples[static_cast<size_t>(j)] * std::polar(1.0, -2.0 * std::numbers::pi * k * j / g);
        out.set(k, acc / static_cast<double>(g));
    }
    return out;
}
} // namespace detail

/// Semigroup product by conformal welding across the seam: the left
/// factor's outgoing boundary (its pplus curve) is sewn to the right
/// factor's incoming boundary (its pminus curve), so the right factor ends
/// up inside and the left factor carries the exterior:
///   p3+ = Phi_in . p2+,  p3- = Phi_out . p1-,
/// with Phi_in holomorphic on the right factor's interior piece and Phi_out
/// on the left factor's exterior piece (Moebius gauge at infinity).
inline NeretinElement multiply(const NeretinElement& g1, const NeretinElement& g2,
                               WeldingReport* report = nullptr) {
    const NeretinConfig& cfg = g1.config();
    int g = cfg.seam_grid;
    std::vector<CD> p1p, p1m, p2p, p2m;
    boundary_samples(g1, g, p1p, p1m);
    boundary_samples(g2, g, p2p, p2m);
    WeldingMaps maps = weld_transition(p2m, p1p, cfg, report);
    std::vector<CD> plus(static_cast<size_t>(g)), minus(static_cast<size_t>(g));
    for (int j = 0; j < g; ++j) {
        plus[static_cast<size_t>(j)] = maps.phi1.eval(p2p[static_cast<size_t>(j)]);
        minus[static_cast<size_t>(j)] = maps.phi2.eval(p1m[static_cast<size_t>(j)]);
    }
    return NeretinElement(detail::dft_series(plus, 0, cfg.K),
                          detail::dft_series(minus, -cfg.K, 1), cfg);
}

// --------------------------------------------------------------------------
// annulus uniformization (the kernel behind the normal form and moduli)
// --------------------------------------------------------------------------

/// An analytic boundary curve with the operations the annulus solver needs:
/// evaluation on the circle parameter and pointwise inversion near its image.
struct AnalyticCurve {
    std::function<CD(CD)> value;
    std::function<CD(CD)> deriv;

    CD invert(CD target, CD start) const {
        CD u = start;
        double fn = std::abs(value(u) - target);
        for (int it = 0; it < 60; ++it) {
            if (fn < 1e-13) return u;
            CD d = deriv(u);
            if (std::abs(d) < 1e-14) raise(errc::gauge_singular, "curve inversion hit a critical point");
            CD step = (value(u) - target) / d;
            double damp = 1.0;
            for (int half = 0; half < 12; ++half) {
                CD un = u - damp * step;
                double fnn = std::abs(value(un) - target);
                if (fnn < fn) {
                    u = un;
                    fn = fnn;
                    break;
                }
                damp *= 0.5;
                if (half == 11) raise(errc::welding_diverged, "curve inversion stalled");
            }
        }
        raise(errc::welding_diverged, "curve inversion did not converge");
    }
};

inline AnalyticCurve unit_circle_curve() {
    return {[](CD z) { return z; }, [](CD) { return CD(1.0); }};
}

inline AnalyticCurve series_curve(const TruncatedSeries<CD>& f) {
    TruncatedSeries<CD> d = derivative(f);
    return {[f](CD z) { return f.eval(z); }, [d](CD z) { return d.eval(z); }};
}

/// Uniformization of the doubly connected domain between two analytic
/// curves (outer, inner) onto a round annulus rho <= |zeta| <= 1: returns
/// the Laurent coefficients of the inverse map G (annulus -> domain) and the
/// modulus -log(rho).  Damped Newton on Fourier-projected boundary
/// conditions log |outer^{-1}(G(e^{i th}))| = 0, log |inner^{-1}(G(rho e^{i th}))| = 0,
/// with the rotation pinned by arg G(1) = 0.
struct AnnulusMap {
    TruncatedSeries<CD> G; // Laurent coefficients, low -K .. K
    double rho = 0.0;
    double modulus() const { return -std::log(rho); }
};

inline AnnulusMap annulus_uniformize(const AnalyticCurve& outer, const AnalyticCurve& inner,
                                     double rho_guess, const NeretinConfig& cfg,
                                     WeldingReport* report = nullptr) {
    int K = cfg.K;
    int g = cfg.seam_grid;
    int nunk = 2 * (2 * K + 1) + 1; // Re/Im of g_{-K..K} plus rho
    // Laurent coefficients of an annulus map decay like rho^{|k|} on the
    // negative side; scaling the unknowns accordingly keeps the Jacobian
    // conditioned and finite differences meaningful
    std::vector<double> cscale(static_cast<size_t>(2 * K + 1), 1.0);
    for (int k = -K; k < 0; ++k)
        cscale[static_cast<size_t>(k + K)] = std::pow(rho_guess, -k);
    auto unpack = [&](const std::vector<double>& x, TruncatedSeries<CD>& G, double& rho) {
        G = TruncatedSeries<CD>::zero(-K, K);
        for (int k = -K; k <= K; ++k)
            G.set(k, cscale[static_cast<size_t>(k + K)] *
                         CD(x[static_cast<size_t>(2 * (k + K))], x[static_cast<size_t>(2 * (k + K) + 1)]));
        rho = x[static_cast<size_t>(nunk - 1)];
    };

    auto residual = [&](const std::vector<double>& x) {
        TruncatedSeries<CD> G;
        double rho;
        unpack(x, G, rho);
        if (!(rho > 1e-8 && rho < 1.0 - 1e-8))
            raise(errc::welding_diverged, "annulus modulus left the feasible range");
        std::vector<double> s_out(static_cast<size_t>(g)), s_in(static_cast<size_t>(g));
        // the preimages live near the unit circle, so the target's phase
        // (shifted by the curve's own rotation) is a start that stays valid
        // even for imperfect intermediate iterates
        double rot_o = std::arg(outer.value(CD(1.0)));
        double rot_i = std::arg(inner.value(CD(1.0)));
        for (int j = 0; j < g; ++j) {
            double th = 2.0 * std::numbers::pi * j / g;
            CD val = G.eval(std::polar(1.0, th));
            CD o = outer.invert(val, std::polar(1.0, std::arg(val) - rot_o));
            s_out[static_cast<size_t>(j)] = std::log(std::abs(o));
            CD vin = G.eval(std::polar(rho, th));
            CD i = inner.invert(vin, std::polar(1.0, std::arg(vin) - rot_i));
            s_in[static_cast<size_t>(j)] = std::log(std::abs(i));
        }
        // pack: rotation pin first, then cos (0..K) and sin (1..K) modes of
        // each boundary defect: 1 + 2(2K+1) = nunk equations
        std::vector<double> out;
        out.reserve(static_cast<size_t>(nunk));
        out.push_back(std::arg(G.eval(CD(1.0))));
        auto project = [&](const std::vector<double>& s) {
            for (int k = 0; k <= K; ++k) {
                double co = 0.0;
                for (int j = 0; j < g; ++j)
                    co += s[static_cast<size_t>(j)] * std::cos(2.0 * std::numbers::pi * k * j / g);
                out.push_back(co * (k == 0 ? 1.0 : 2.0) / g);
            }
            for (int k = 1; k <= K; ++k) {
                double so = 0.0;
                for (int j = 0; j < g; ++j)
                    so += s[static_cast<size_t>(j)] * std::sin(2.0 * std::numbers::pi * k * j / g);
                out.push_back(so * 2.0 / g);
            }
        };
        project(s_out);
        project(s_in);
        return out;
    };

    // initial guess: G = identity-scaled circle map
    std::vector<double> x(static_cast<size_t>(nunk), 0.0);
    x[static_cast<size_t>(2 * (1 + K))] = 1.0; // g_1 = 1
    x[static_cast<size_t>(nunk - 1)] = rho_guess;

    auto norm_inf = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double d : v) m = std::max(m, std::abs(d));
        return m;
    };
    std::vector<double> r = residual(x);
    double rn = norm_inf(r);
    WeldingReport rep;
    rep.residuals.push_back(rn);
    // Gauss-Newton with Levenberg-Marquardt regularization: the boundary
    // conditions are blind to coefficient directions whose effect falls
    // below the truncation floor, so the raw Jacobian can be singular.
    double lm = 1e-10;
    for (int it = 0; it < cfg.max_iter && rn > cfg.tol; ++it) {
        std::vector<std::vector<double>> jac(static_cast<size_t>(nunk),
                                             std::vector<double>(static_cast<size_t>(nunk), 0.0));
        const double h = 1e-7;
        for (int c = 0; c < nunk; ++c) {
            std::vector<double> xp = x;
            xp[static_cast<size_t>(c)] += h;
            std::vector<double> rp = residual(xp);
            for (int rr = 0; rr < nunk; ++rr)
                jac[static_cast<size_t>(rr)][static_cast<size_t>(c)] =
                    (rp[static_cast<size_t>(rr)] - r[static_cast<size_t>(rr)]) / h;
        }
        std::vector<std::vector<double>> jtj(static_cast<size_t>(nunk),
                                             std::vector<double>(static_cast<size_t>(nunk), 0.0));
        std::vector<double> jtr(static_cast<size_t>(nunk), 0.0);
        double diag_scale = 0.0;
        for (int i = 0; i < nunk; ++i) {
            for (int j2 = 0; j2 < nunk; ++j2) {
                double s = 0.0;
                for (int k = 0; k < nunk; ++k)
                    s += jac[static_cast<size_t>(k)][static_cast<size_t>(i)] *
                         jac[static_cast<size_t>(k)][static_cast<size_t>(j2)];
                jtj[static_cast<size_t>(i)][static_cast<size_t>(j2)] = s;
            }
            diag_scale = std::max(diag_scale, jtj[static_cast<size_t>(i)][static_cast<size_t>(i)]);
            double s = 0.0;
            for (int k = 0; k < nunk; ++k)
                s += jac[static_cast<size_t>(k)][static_cast<size_t>(i)] * r[static_cast<size_t>(k)];
            jtr[static_cast<size_t>(i)] = s;
        }
        std::vector<double> xn;
        std::vector<double> rnew;
        double rn_new = rn;
        bool accepted = false;
        for (int tries = 0; tries < 12; ++tries) {
            std::vector<std::vector<double>> sys = jtj;
            for (int i = 0; i < nunk; ++i) sys[static_cast<size_t>(i)][static_cast<size_t>(i)] += lm * diag_scale;
            std::vector<double> step = solve_linear_real(sys, jtr);
            xn = x;
            for (int c = 0; c < nunk; ++c) xn[static_cast<size_t>(c)] -= step[static_cast<size_t>(c)];
            try {
                rnew = residual(xn);
                rn_new = norm_inf(rnew);
            } catch (const error&) {
                rn_new = rn + 1.0;
            }
            if (rn_new < rn) {
                accepted = true;
                lm = std::max(1e-14, lm / 4.0);
                break;
            }
            lm *= 10.0;
        }
        if (!accepted) {
            if (report) *report = rep;
            if (rn < 64.0 * cfg.tol) break;
            raise(errc::welding_diverged, "annulus solve stalled");
        }
        x = std::move(xn);
        r = std::move(rnew);
        rn = rn_new;
        rep.residuals.push_back(rn);
        rep.iterations = it + 1;
    }
    if (report) *report = rep;
    if (rn > 64.0 * cfg.tol) raise(errc::welding_diverged, "annulus solve did not reach tolerance");
    AnnulusMap out;
    unpack(x, out.G, out.rho);
    return out;
}

/// Conformal modulus of the annular region between the element's boundary
/// curves.
inline double element_modulus(const NeretinElement& g, WeldingReport* report = nullptr) {
    AnalyticCurve outer = series_curve(g.pminus());
    AnalyticCurve inner = series_curve(g.pplus());
    double r0 = std::abs(g.pplus().coeff(1));
    AnnulusMap m = annulus_uniformize(outer, inner, std::min(0.95, std::max(0.05, r0)), g.config(), report);
    return m.modulus();
}

// --------------------------------------------------------------------------
// formal products and the normal form
// --------------------------------------------------------------------------

/// Analytic extension of the boundary map e^{it} -> e^{i p(t)} of a circle
/// diffeomorphism with trigonometric-polynomial periodic part:
/// P(zeta) = zeta exp(i Pi(zeta)) with cos(kt) -> (zeta^k + zeta^{-k})/2 and
/// sin(kt) -> (zeta^k - zeta^{-k})/(2i); single-valued on the punctured plane.
struct DiffeoExtension {
    double a0 = 0.0;
    std::vector<double> ac, as; // cos/sin coefficients, 1-based harmonic k

    explicit DiffeoExtension(const CircleDiffeo& p) {
        if (p.orientation() != +1) raise(errc::bad_input, "extension needs orientation +");
        const TrigPoly<CD>& q = p.periodic_part();
        a0 = q.mode(0).real();
        for (int k = 1; k <= q.degree(); ++k) {
            ac.push_back(q.cos_coeff(k).real());
            as.push_back(q.sin_coeff(k).real());
        }
    }

    CD exponent(CD zeta) const { // Pi(zeta)
        CD acc(a0, 0.0);
        CD zp = zeta, zm = CD(1.0) / zeta;
        for (size_t k = 0; k < ac.size(); ++k) {
            acc += ac[k] * 0.5 * (zp + zm);
            acc += as[k] * (zp - zm) / CD(0.0, 2.0);
            zp *= zeta;
            zm /= zeta;
        }
        return acc;
    }
    CD exponent_deriv(CD zeta) const {
        CD acc(0.0);
        CD zp = CD(1.0), zm = CD(1.0) / (zeta * zeta);
        for (size_t k = 0; k < ac.size(); ++k) {
            double kk = static_cast<double>(k + 1);
            acc += ac[k] * 0.5 * kk * (zp - zm);
            acc += as[k] * kk * (zp + zm) / CD(0.0, 2.0);
            zp *= zeta;
            zm /= zeta;
        }
        return acc;
    }
    CD value(CD zeta) const { return zeta * std::exp(CD(0.0, 1.0) * exponent(zeta)); }
    CD deriv(CD zeta) const {
        CD e = std::exp(CD(0.0, 1.0) * exponent(zeta));
        return e * (CD(1.0) + CD(0.0, 1.0) * zeta * exponent_deriv(zeta));
    }

    /// Derivative-margin bound of the extension on the annulus e^{-tau} <= |z| <= 1.
    double distortion(double tau) const {
        double d = 0.0;
        for (size_t k = 0; k < ac.size(); ++k)
            d += (k + 1) * (std::abs(ac[k]) + std::abs(as[k])) * std::exp((k + 1.0) * tau);
        return d;
    }
};

/// Formal product p . A(t) . q of boundary reparametrizations around a
/// scaling, rotation-normalized so that p fixes the basepoint (p(1) = 1).
struct FormalProduct {
    CircleDiffeo p;
    CircleDiffeo q;
    double t = 0.0;
};

inline FormalProduct make_formal_product(const CircleDiffeo& p, double t, const CircleDiffeo& q) {
    if (!(t > 0.0)) raise(errc::not_contracting, "formal product needs t > 0");
    if (p.orientation() != +1 || q.orientation() != +1)
        raise(errc::not_a_diffeo, "formal product factors must preserve orientation");
    // rotations commute with scalings: shift the basepoint into q
    double beta = p.invert_point(0.0);
    CircleDiffeo pn = diffeo_compose(p, CircleDiffeo::rotation(beta, p.config()));
    CircleDiffeo qn = diffeo_compose(CircleDiffeo::rotation(-beta, q.config()), q);
    return {pn, qn, t};
}

/// Single reduction A(s) . p . A(t) = p' . A(t') . q' (p must extend to the
/// annulus; callers split t beforehand).  The inner boundary is the image
/// curve gamma(z) = e^{-s} P(e^{-t} z); the annulus kernel produces the
/// modulus and both boundary correspondences.
inline FormalProduct normal_form_single(double s, const CircleDiffeo& p, double t,
                                        const NeretinConfig& cfg) {
    DiffeoExtension ext(p);
    double shrink_in = std::exp(-t), shrink_out = std::exp(-s);
    AnalyticCurve gamma{
        [ext, shrink_in, shrink_out](CD z) { return shrink_out * ext.value(shrink_in * z); },
        [ext, shrink_in, shrink_out](CD z) { return shrink_out * shrink_in * ext.deriv(shrink_in * z); }};
    AnnulusMap m = annulus_uniformize(unit_circle_curve(), gamma, std::exp(-(s + t)), cfg);

    int g = cfg.seam_grid;
    // p' = G restricted to the unit circle, as an angle function
    std::vector<double> pper(static_cast<size_t>(g));
    {
        double prev = 0.0;
        for (int j = 0; j < g; ++j) {
            double th = 2.0 * std::numbers::pi * j / g;
            double ang = std::arg(m.G.eval(std::polar(1.0, th)));
            if (j > 0) {
                while (ang < prev - std::numbers::pi) ang += 2.0 * std::numbers::pi;
                while (ang > prev + std::numbers::pi) ang -= 2.0 * std::numbers::pi;
            }
            prev = ang;
            pper[static_cast<size_t>(j)] = ang - th;
        }
    }
    // q' = scale-back of G^{-1} along the inner curve
    TruncatedSeries<CD> gd = derivative(m.G);
    AnalyticCurve gcurve{[&](CD z) { return m.G.eval(z); }, [&](CD z) { return gd.eval(z); }};
    std::vector<double> qper(static_cast<size_t>(g));
    {
        CD prev_pt(0.0);
        double prev_ang = 0.0;
        for (int j = 0; j < g; ++j) {
            double th = 2.0 * std::numbers::pi * j / g;
            CD target = gamma.value(std::polar(1.0, th));
            CD start = j == 0 ? std::polar(m.rho, std::arg(target) - std::arg(m.G.eval(CD(m.rho, 0.0))) )
                              : prev_pt * std::polar(1.0, 2.0 * std::numbers::pi / g);
            prev_pt = gcurve.invert(target, start);
            double ang = std::arg(prev_pt / m.rho);
            if (j > 0) {
                while (ang < prev_ang - std::numbers::pi) ang += 2.0 * std::numbers::pi;
                while (ang > prev_ang + std::numbers::pi) ang -= 2.0 * std::numbers::pi;
            }
            prev_ang = ang;
            qper[static_cast<size_t>(j)] = ang - th;
        }
    }
    DiffeoConfig dcfg;
    dcfg.grid = g;
    dcfg.degree = std::min(cfg.K, g / 8);
    // fitted boundary correspondences carry a DFT noise floor; harmonics at
    // that floor would blow up when the maps are analytically continued, so
    // they are trimmed away
    CircleDiffeo pprime(fit_trig(pper, dcfg.degree).trimmed(1e-11), +1, dcfg);
    CircleDiffeo qprime(fit_trig(qper, dcfg.degree).trimmed(1e-11), +1, dcfg);
    return {pprime, qprime, m.modulus()};
}

/// Normal form of A(s) . x.p . A(x.t) . x.q, splitting the scaling when the
/// reparametrization does not extend across the full annulus.
inline FormalProduct normal_form(const FormalProduct& x, double s,
                                 NeretinConfig cfg = NeretinConfig{}) {
    if (!(s > 0.0)) raise(errc::not_contracting, "normal form needs s > 0");
    DiffeoExtension ext(x.p);
    int n = 1;
    if (ext.distortion(x.t) > 0.5) {
        double lo = 0.0, hi = x.t;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            (ext.distortion(mid) <= 0.5 ? lo : hi) = mid;
        }
        if (lo <= 1e-6) raise(errc::split_limit, "reparametrization too rough to extend");
        n = static_cast<int>(std::ceil(x.t / lo));
        if (n > 64) raise(errc::split_limit, "scaling split exceeds the recursion bound");
    }
    double chunk = x.t / n;
    FormalProduct cur = normal_form_single(s, x.p, chunk, cfg);
    for (int i = 1; i < n; ++i) {
        FormalProduct nf = normal_form_single(cur.t, cur.q, chunk, cfg);
        cur.p = diffeo_compose(cur.p, nf.p);
        cur.q = nf.q;
        cur.t = nf.t;
    }
    cur.q = diffeo_compose(cur.q, x.q);
    return cur;
}

/// Pair representation of the formal product p . A(t) . q: weld the unit
/// disk to the exterior piece along the seam curve
/// sigma(e^{i th}) = P(e^{-t} e^{i q(th)}); the transition maps themselves
/// are the pair components.  When p does not extend across the whole
/// annulus, the product is factored through chunked scalings
/// (p A(t/n)) (A(t/n))^{n-2} (A(t/n) q) and assembled by multiplication.
inline NeretinElement formal_to_element(const FormalProduct& x, NeretinConfig cfg = NeretinConfig{}) {
    DiffeoExtension ext(x.p);
    auto piece = [&cfg](const CircleDiffeo& p, double t, const CircleDiffeo& q) {
        DiffeoExtension pe(p);
        if (pe.distortion(t) > 0.5)
            raise(errc::split_limit, "reparametrization does not extend to the annulus");
        int g = cfg.seam_grid;
        std::vector<CD> a(static_cast<size_t>(g)), b(static_cast<size_t>(g));
        double shrink = std::exp(-t);
        for (int j = 0; j < g; ++j) {
            double th = 2.0 * std::numbers::pi * j / g;
            a[static_cast<size_t>(j)] = std::polar(1.0, th);
            b[static_cast<size_t>(j)] = pe.value(shrink * std::polar(1.0, q(th)));
        }
        WeldingMaps maps = weld_transition(a, b, cfg);
        return NeretinElement(maps.phi1, maps.phi2, cfg);
    };
    if (ext.distortion(x.t) <= 0.5) return piece(x.p, x.t, x.q);
    int n = 2;
    while (n <= 64 && ext.distortion(x.t / n) > 0.5) ++n;
    if (n > 64) raise(errc::split_limit, "reparametrization too rough to extend");
    double chunk = x.t / n;
    CircleDiffeo id = CircleDiffeo::identity();
    NeretinElement acc = piece(x.p, chunk, id);
    for (int i = 1; i < n - 1; ++i) acc = multiply(acc, NeretinElement::scaling(chunk, cfg));
    return multiply(acc, piece(id, chunk, x.q));
}

// --------------------------------------------------------------------------
// the semigroup 2-cocycle
// --------------------------------------------------------------------------

namespace detail {

/// Branch-tracked logarithm of the divided-difference kernel
/// (f(z) - f(w))/(z - w) on a staggered torus grid.  The kernel of a
/// univalent boundary map never vanishes and carries no winding in either
/// torus direction, so a global branch exists; inconsistencies raise.
inline std::vector<std::vector<CD>> kernel_log_table(const TruncatedSeries<CD>& f, int grid) {
    std::vector<CD> fz(static_cast<size_t>(grid)), fw(static_cast<size_t>(grid));
    std::vector<CD> zs(static_cast<size_t>(grid)), ws(static_cast<size_t>(grid));
    for (int j = 0; j < grid; ++j) {
        double a = 2.0 * std::numbers::pi * j / grid;
        double b = a + std::numbers::pi / grid; // stagger the grids so z != w
        zs[static_cast<size_t>(j)] = std::polar(1.0, a);
        ws[static_cast<size_t>(j)] = std::polar(1.0, b);
        fz[static_cast<size_t>(j)] = f.eval(zs[static_cast<size_t>(j)]);
        fw[static_cast<size_t>(j)] = f.eval(ws[static_cast<size_t>(j)]);
    }
    std::vector<std::vector<CD>> lg(static_cast<size_t>(grid), std::vector<CD>(static_cast<size_t>(grid)));
    auto kernel = [&](int i, int j) {
        CD num = fz[static_cast<size_t>(i)] - fw[static_cast<size_t>(j)];
        CD den = zs[static_cast<size_t>(i)] - ws[static_cast<size_t>(j)];
        if (std::abs(num) == 0.0) raise(errc::not_jordan, "boundary data is not injective");
        return num / den;
    };
    auto continue_log = [](CD prev_log, CD value, CD prev_value) {
        CD ratio = value / prev_value;
        if (std::abs(ratio - CD(1.0)) > 1.5)
            raise(errc::branch_ambiguity, "kernel sampling too coarse to track the branch");
        return prev_log + std::log(ratio);
    };
    lg[0][0] = std::log(kernel(0, 0));
    for (int j = 1; j < grid; ++j) lg[0][static_cast<size_t>(j)] =
        continue_log(lg[0][static_cast<size_t>(j - 1)], kernel(0, j), kernel(0, j - 1));
    for (int i = 1; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            lg[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                continue_log(lg[static_cast<size_t>(i - 1)][static_cast<size_t>(j)], kernel(i, j),
                             kernel(i - 1, j));
    return lg;
}

/// Weighted moment block of the kernel log: sqrt(mn) times the coefficient
/// of z^{sm} w^{sn} (s = +1 or -1), m, n = 1..M, by double trapezoid
/// quadrature over the torus grid.
inline CMatrix kernel_block(const TruncatedSeries<CD>& f, int msize, int grid, int sign) {
    auto lg = kernel_log_table(f, grid);
    // row transforms first: R[i][n] = sum_j lg[i][j] e^{-i sign n theta_w(j)}
    std::vector<std::vector<CD>> row(static_cast<size_t>(grid), std::vector<CD>(static_cast<size_t>(msize)));
    for (int i = 0; i < grid; ++i)
        for (int n = 1; n <= msize; ++n) {
            CD acc = 0.0;
            for (int j = 0; j < grid; ++j) {
                double thw = 2.0 * std::numbers::pi * j / grid + std::numbers::pi / grid;
                acc += lg[static_cast<size_t>(i)][static_cast<size_t>(j)] *
                       std::polar(1.0, -sign * n * thw);
            }
            row[static_cast<size_t>(i)][static_cast<size_t>(n - 1)] = acc;
        }
    CMatrix b(msize, msize);
    for (int m = 1; m <= msize; ++m)
        for (int n = 1; n <= msize; ++n) {
            CD acc = 0.0;
            for (int i = 0; i < grid; ++i)
                acc += row[static_cast<size_t>(i)][static_cast<size_t>(n - 1)] *
                       std::polar(1.0, -sign * m * (2.0 * std::numbers::pi * i / grid));
            b(m - 1, n - 1) = std::sqrt(static_cast<double>(m) * n) * acc /
                              (static_cast<double>(grid) * grid);
        }
    return b;
}

/// Principal log-determinant by LU factorization.
inline CD log_determinant(CMatrix m) {
    int n = m.rows();
    CD acc = 0.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
        if (std::abs(m(piv, c)) < 1e-300) raise(errc::gauge_singular, "singular determinant");
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
            acc += CD(0.0, std::numbers::pi); // det sign flip
        }
        acc += std::log(m(c, c));
        for (int r = c + 1; r < n; ++r) {
            CD f = m(r, c) / m(c, c);
            for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
        }
    }
    return acc;
}

} // namespace detail

/// Central-extension 2-cocycle of the product g1 g2, evaluated as the
/// log-determinant anomaly of the welding: the two seam parametrizations
/// p1+ and p2- contribute weighted moment blocks B1 (positive modes) and
/// B2 (negative modes) of their divided-difference kernels, and
///   c(g1, g2) = log det(I - B1 B2).
/// Both blocks are contour-quadrature moments of the pair's p-components on
/// the unit circle, so the value is well defined for product factors too.
/// The scaling subfamily and the neutral element give exactly zero, and the
/// group 2-cocycle identity holds to quadrature accuracy.
inline CD neretin_cocycle(const NeretinElement& g1, const NeretinElement& g2, int quad = 384,
                          int msize = 24) {
    CMatrix b1 = detail::kernel_block(g1.pplus(), msize, quad, +1);
    CMatrix b2 = detail::kernel_block(g2.pminus(), msize, quad, -1);
    CMatrix m = CMatrix::identity(msize) - b1 * b2;
    return detail::log_determinant(std::move(m));
}

// --------------------------------------------------------------------------
// boundary data of circle diffeomorphisms (the local-group embedding)
// --------------------------------------------------------------------------

/// Boundary curve e^{i g(t)} of an orientation-preserving circle map,
/// validated as seam data: immersed, winding once around zero, with
/// geometrically decaying Fourier coefficients.
struct BoundaryDatum {
    TrigPoly<CD> curve;
};

/// Validate an analytic map of the circle into the punctured plane as seam
/// data: immersed, winding once around zero, coefficients resolved.
inline BoundaryDatum boundary_datum_from_series(const TruncatedSeries<CD>& f, int samples = 1024) {
    TruncatedSeries<CD> fd = derivative(f);
    std::vector<CD> vals(static_cast<size_t>(samples));
    for (int j = 0; j < samples; ++j) {
        CD z = std::polar(1.0, 2.0 * std::numbers::pi * j / samples);
        vals[static_cast<size_t>(j)] = f.eval(z);
        if (std::abs(fd.eval(z)) < 1e-9) raise(errc::not_immersive, "derivative vanishes on the circle");
        if (std::abs(vals[static_cast<size_t>(j)]) < 1e-12)
            raise(errc::not_jordan, "boundary curve passes through zero");
    }
    if (NeretinElement::winding(vals, CD(0.0)) != 1)
        raise(errc::not_jordan, "boundary curve must wind once around zero");
    // sampling-level simplicity check: parameter-distant points with nearly
    // coincident images flag a crossing (heuristic, per the sampling contract)
    double scale = 0.0;
    for (const auto& v : vals) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < samples; i += 2)
        for (int j = i + 2; j < samples; j += 2) {
            int gap = std::min(j - i, samples - (j - i));
            if (gap < samples / 16) continue;
            if (std::abs(vals[static_cast<size_t>(i)] - vals[static_cast<size_t>(j)]) < 1e-2 * scale)
                raise(errc::not_jordan, "boundary curve self-intersects");
        }
    int deg = std::max(1, std::min(64, f.order()));
    TrigPoly<CD> curve(deg);
    for (int k = std::max(f.low(), -deg); k <= std::min(f.order(), deg); ++k) curve.set_mode(k, f.coeff(k));
    return {curve};
}

inline BoundaryDatum embed_diffeo(const CircleDiffeo& g, int degree = 48, double decay_tol = 1e-8) {
    int n = g.grid();
    std::vector<double> re(static_cast<size_t>(n)), im(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        double t = 2.0 * std::numbers::pi * j / n;
        if (std::abs(g.deriv(t)) < 1e-9) raise(errc::not_immersive, "derivative vanishes on the circle");
        double a = g(t);
        re[static_cast<size_t>(j)] = std::cos(a);
        im[static_cast<size_t>(j)] = std::sin(a);
    }
    TrigPoly<CD> fit_re = fit_trig(re, degree);
    TrigPoly<CD> fit_im = fit_trig(im, degree);
    TrigPoly<CD> curve(degree);
    for (int k = -degree; k <= degree; ++k)
        curve.set_mode(k, fit_re.mode(k) + CD(0.0, 1.0) * fit_im.mode(k));
    // analyticity: the fitted tail must have decayed
    double tail = 0.0;
    for (int k = degree - 4; k <= degree; ++k)
        tail = std::max({tail, std::abs(curve.mode(k)), std::abs(curve.mode(-k))});
    if (tail > decay_tol) raise(errc::not_jordan, "boundary data does not resolve analytically");
    std::vector<CD> samples(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j)
        samples[static_cast<size_t>(j)] = CD(re[static_cast<size_t>(j)], im[static_cast<size_t>(j)]);
    if (NeretinElement::winding(samples, CD(0.0)) != 1)
        raise(errc::not_jordan, "boundary curve must wind once around zero");
    return {curve};
}

// --------------------------------------------------------------------------
// serialization: two labelled series blocks
// --------------------------------------------------------------------------

inline void write_element(std::ostream& os, const NeretinElement& g) {
    os << "pplus\n";
    write_series(os, g.pplus());
    os << "pminus\n";
    write_series(os, g.pminus());
}

inline NeretinElement read_element(std::istream& is, NeretinConfig cfg = NeretinConfig{}) {
    std::string tag;
    if (!(is >> tag) || tag != "pplus") raise(errc::bad_input, "expected 'pplus' block");
    TruncatedSeries<CD> plus = read_series_float(is);
    if (!(is >> tag) || tag != "pminus") raise(errc::bad_input, "expected 'pminus' block");
    TruncatedSeries<CD> minus = read_series_float(is);
    return NeretinElement(std::move(plus), std::move(minus), cfg);
}

} // namespace virgeo

#endif
