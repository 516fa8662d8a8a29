#ifndef VIRGEO_DIFFEO_HPP
#define VIRGEO_DIFFEO_HPP

#include <cmath>
#include <numbers>
#include <vector>

#include "virgeo/series.hpp"
#include "virgeo/virasoro.hpp"

namespace virgeo {

struct DiffeoConfig {
    int grid = 4096;        // cached sample count (power of two)
    int degree = 64;        // Fourier fit degree
    double deriv_margin = 1e-9;
    double newton_tol = 1e-12;
    int newton_max = 50;
};

/// Fit a smooth periodic sample vector to a trigonometric polynomial of the
/// given degree.  Plain DFT sums; spectrally exact for band-limited data.
inline TrigPoly<CD> fit_trig(const std::vector<double>& samples, int degree) {
    int g = static_cast<int>(samples.size());
    TrigPoly<CD> p(degree);
    const double step = 2.0 * std::numbers::pi / g;
    for (int k = 0; k <= degree; ++k) {
        CD acc = 0.0;
        for (int j = 0; j < g; ++j) acc += samples[static_cast<size_t>(j)] * std::polar(1.0, -k * step * j);
        acc /= static_cast<double>(g);
        p.set_mode(k, acc);
        if (k > 0) p.set_mode(-k, std::conj(acc));
    }
    return p;
}

/// Orientation-tagged circle map g(t) = sigma t + P(t) with 2 pi periodic P
/// and nonvanishing derivative.  Grid samples are cached eagerly so shared
/// instances are read-only.
class CircleDiffeo {
public:
    CircleDiffeo() : CircleDiffeo(TrigPoly<CD>(0), +1) {}

    explicit CircleDiffeo(TrigPoly<CD> periodic, int orientation = +1,
                          DiffeoConfig cfg = DiffeoConfig{})
        : periodic_(std::move(periodic)), orientation_(orientation), cfg_(cfg) {
        if (orientation_ != 1 && orientation_ != -1)
            raise(errc::bad_input, "orientation must be +1 or -1");
        if (!periodic_.is_real()) raise(errc::not_a_diffeo, "periodic part must be real-valued");
        cache_grid();
        double margin = orientation_ > 0 ? min_deriv_ : -max_deriv_;
        if (margin <= cfg_.deriv_margin)
            raise(errc::not_a_diffeo, "derivative does not keep a positive margin");
    }

    static CircleDiffeo identity(DiffeoConfig cfg = DiffeoConfig{}) {
        return CircleDiffeo(TrigPoly<CD>(0), +1, cfg);
    }
    static CircleDiffeo rotation(double alpha, DiffeoConfig cfg = DiffeoConfig{}) {
        return CircleDiffeo(TrigPoly<CD>::constant(CD(alpha, 0.0)), +1, cfg);
    }
    /// The standard reflection s_-(t) = -t conjugated by rotation: t -> 2 theta - t.
    static CircleDiffeo reflection(double theta, DiffeoConfig cfg = DiffeoConfig{}) {
        return CircleDiffeo(TrigPoly<CD>::constant(CD(2.0 * theta, 0.0)), -1, cfg);
    }

    int orientation() const { return orientation_; }
    const TrigPoly<CD>& periodic_part() const { return periodic_; }
    const DiffeoConfig& config() const { return cfg_; }
    int grid() const { return cfg_.grid; }

    double operator()(double t) const { return orientation_ * t + eval_real(periodic_, t); }
    double deriv(double t) const { return orientation_ + eval_real(periodic_.derivative(), t); }
    double deriv2(double t) const { return eval_real(periodic_.derivative().derivative(), t); }
    double deriv3(double t) const {
        return eval_real(periodic_.derivative().derivative().derivative(), t);
    }

    const std::vector<double>& samples() const { return samples_; }
    const std::vector<double>& deriv_samples() const { return dsamples_; }

    /// Solve g(x) = y by safeguarded Newton on the monotone lift.
    double invert_point(double y) const {
        double bound = coeff_mass() + 1.0;
        double lo, hi;
        if (orientation_ > 0) {
            lo = y - bound;
            hi = y + bound;
        } else {
            lo = -y - bound;
            hi = -y + bound;
        }
        double x = orientation_ * y;
        for (int it = 0; it < cfg_.newton_max; ++it) {
            double f = (*this)(x) - y;
            if (std::abs(f) < cfg_.newton_tol) return x;
            double d = deriv(x);
            double step = f / d;
            double nx = x - step;
            if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
            double fx = orientation_ > 0 ? f : -f;
            if (fx > 0) hi = std::min(hi, x);
            else lo = std::max(lo, x);
            x = nx;
        }
        if (std::abs((*this)(x) - y) < 1e2 * cfg_.newton_tol) return x;
        raise(errc::inversion_diverged, "pointwise inversion did not converge");
    }

private:
    void cache_grid() {
        int g = cfg_.grid;
        samples_.resize(static_cast<size_t>(g));
        dsamples_.resize(static_cast<size_t>(g));
        TrigPoly<CD> dp = periodic_.derivative();
        min_deriv_ = 1e300;
        max_deriv_ = -1e300;
        const double step = 2.0 * std::numbers::pi / g;
        for (int j = 0; j < g; ++j) {
            double t = step * j;
            samples_[static_cast<size_t>(j)] = orientation_ * t + eval_real(periodic_, t);
            double d = orientation_ + eval_real(dp, t);
            dsamples_[static_cast<size_t>(j)] = d;
            min_deriv_ = std::min(min_deriv_, d);
            max_deriv_ = std::max(max_deriv_, d);
        }
    }

    double coeff_mass() const {
        double m = std::abs(periodic_.mode(0));
        for (int k = 1; k <= periodic_.degree(); ++k)
            m += std::abs(periodic_.mode(k)) + std::abs(periodic_.mode(-k));
        return m;
    }

    TrigPoly<CD> periodic_;
    int orientation_;
    DiffeoConfig cfg_;
    std::vector<double> samples_;
    std::vector<double> dsamples_;
    double min_deriv_ = 0.0, max_deriv_ = 0.0;
};

/// g1 after g2: (g1 . g2)(t) = g1(g2(t)), refit to Fourier coefficients.
inline CircleDiffeo diffeo_compose(const CircleDiffeo& g1, const CircleDiffeo& g2) {
    DiffeoConfig cfg = g1.config();
    cfg.degree = std::min(g1.config().degree + g2.config().degree, 128);
    int g = cfg.grid;
    int ori = g1.orientation() * g2.orientation();
    std::vector<double> per(static_cast<size_t>(g));
    const double step = 2.0 * std::numbers::pi / g;
    for (int j = 0; j < g; ++j) {
        double t = step * j;
        per[static_cast<size_t>(j)] = g1(g2(t)) - ori * t;
    }
    return CircleDiffeo(fit_trig(per, cfg.degree).trimmed(), ori, cfg);
}

inline CircleDiffeo diffeo_invert(const CircleDiffeo& g) {
    DiffeoConfig cfg = g.config();
    // inverse maps have a narrower analyticity strip, so fit more harmonics
    cfg.degree = std::min(std::max(2 * cfg.degree, 96), cfg.grid / 8);
    int n = cfg.grid;
    std::vector<double> per(static_cast<size_t>(n));
    const double step = 2.0 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j) {
        double t = step * j;
        per[static_cast<size_t>(j)] = g.invert_point(t) - g.orientation() * t;
    }
    // the inverse of an orientation-sigma map is again orientation-sigma
    return CircleDiffeo(fit_trig(per, cfg.degree).trimmed(), g.orientation(), cfg);
}

/// Flow of the (real) vector field v for the given time: fixed-step RK4 per
/// gridpoint of the autonomous ODE dgamma/ds = v(gamma).
inline CircleDiffeo flow_exp(const FourierField<CD>& v, double time,
                             DiffeoConfig cfg = DiffeoConfig{}) {
    if (!v.coef.is_real()) raise(errc::bad_input, "flow field must be real-valued");
    double speed = 0.0;
    for (int k = -v.coef.degree(); k <= v.coef.degree(); ++k)
        speed += std::abs(v.coef.mode(k)) * std::max(1, std::abs(k));
    if (std::abs(time) * speed > 64.0)
        raise(errc::flow_unstable, "time * field norm beyond the stability bound");
    int steps = std::max(64, static_cast<int>(std::ceil(40.0 * std::abs(time) * (1.0 + speed))));
    double h = time / steps;
    int g = cfg.grid;
    std::vector<double> per(static_cast<size_t>(g));
    const double step = 2.0 * std::numbers::pi / g;
    auto vel = [&v](double x) { return eval_real(v.coef, x); };
    for (int j = 0; j < g; ++j) {
        double x = step * j;
        for (int s = 0; s < steps; ++s) {
            double k1 = vel(x);
            double k2 = vel(x + 0.5 * h * k1);
            double k3 = vel(x + 0.5 * h * k2);
            double k4 = vel(x + h * k3);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        per[static_cast<size_t>(j)] = x - step * j;
    }
    // monotonicity of the flow map across the grid
    for (int j = 0; j < g; ++j) {
        double a = per[static_cast<size_t>(j)] + step * j;
        double b = j + 1 < g ? per[static_cast<size_t>(j + 1)] + step * (j + 1)
                             : per[0] + 2.0 * std::numbers::pi;
        if (b <= a) raise(errc::flow_unstable, "flow lost monotonicity");
    }
    return CircleDiffeo(fit_trig(per, cfg.degree).trimmed(), +1, cfg);
}

/// Bott group 2-cocycle: integral over the circle of log((g1 . g2)'(t)) with
/// respect to d log(g2'(t)), by trapezoidal quadrature on the shared grid.
inline double bott_cocycle(const CircleDiffeo& g1, const CircleDiffeo& g2) {
    if (g1.orientation() < 0 || g2.orientation() < 0)
        raise(errc::not_a_diffeo, "Bott cocycle needs orientation-preserving maps");
    int g = std::max(g1.grid(), g2.grid());
    const double step = 2.0 * std::numbers::pi / g;
    double acc = 0.0;
    for (int j = 0; j < g; ++j) {
        double t = step * j;
        double d2 = g2.deriv(t);
        double d1 = g1.deriv(g2(t));
        if (d1 <= 0.0 || d2 <= 0.0) raise(errc::not_a_diffeo, "nonpositive derivative");
        double loga = std::log(d1 * d2);
        double dlog = g2.deriv2(t) / d2; // d/dt log g2'
        acc += loga * dlog;
    }
    return acc * step;
}

/// Pointwise Schwarzian derivative of a circle diffeomorphism, refit to a
/// Fourier function.
inline TrigPoly<CD> schwarzian(const CircleDiffeo& g, int degree = 64) {
    int n = g.grid();
    std::vector<double> s(static_cast<size_t>(n));
    const double step = 2.0 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j) {
        double t = step * j;
        double d1 = g.deriv(t);
        if (std::abs(d1) < 1e-12) raise(errc::not_a_diffeo, "vanishing derivative");
        double d2 = g.deriv2(t), d3 = g.deriv3(t);
        double r = d2 / d1;
        s[static_cast<size_t>(j)] = d3 / d1 - 1.5 * r * r;
    }
    return fit_trig(s, degree).trimmed();
}

/// Schwarzian in series mode: S(f) = f'''/f' - 3/2 (f''/f')^2; exact over
/// exact scalars, identically zero on Moebius maps.
template <class S>
TruncatedSeries<S> schwarzian_series(const TruncatedSeries<S>& f) {
    using T = scalar_traits<S>;
    TruncatedSeries<S> f1 = derivative(f);
    if (f1.order() < 0 || T::is_zero(f1.coeff(0)))
        raise(errc::not_a_diffeo, "schwarzian needs f'(0) != 0");
    TruncatedSeries<S> f2 = derivative(f1);
    TruncatedSeries<S> f3 = derivative(f2);
    TruncatedSeries<S> r = f2 / f1;
    return f3 / f1 - (r * r) * T::from_ratio(f.proto(), 3, 2);
}

/// Point of the dual space: quadratic differential p(t) dt^2 plus central
/// charge b (invariant under the action).
struct CoadjointVector {
    TrigPoly<CD> p;
    double b = 0.0;
};

/// Coadjoint action K(g)(p, b) = ((p o g) (g')^2 - b S(g), b).
inline CoadjointVector coadjoint_act(const CircleDiffeo& g, const CoadjointVector& x,
                                     int degree = 64) {
    if (g.orientation() < 0) raise(errc::not_a_diffeo, "coadjoint action needs orientation +");
    int n = g.grid();
    std::vector<double> s(static_cast<size_t>(n));
    const double step = 2.0 * std::numbers::pi / n;
    TrigPoly<CD> sg = schwarzian(g, degree);
    for (int j = 0; j < n; ++j) {
        double t = step * j;
        double d = g.deriv(t);
        s[static_cast<size_t>(j)] = eval_real(x.p, g(t)) * d * d - x.b * eval_real(sg, t);
    }
    return {fit_trig(s, degree).trimmed(), x.b};
}

/// Push-forward of a probability density: u -> u(g^{-1}(t)) (g^{-1})'(t).
inline TrigPoly<CD> density_act(const CircleDiffeo& g, const TrigPoly<CD>& u, int degree = 64) {
    int n = g.grid();
    const double step = 2.0 * std::numbers::pi / n;
    double mass = u.mean().real() * 2.0 * std::numbers::pi;
    for (int j = 0; j < n; ++j)
        if (eval_real(u, step * j) <= 0.0)
            raise(errc::not_a_probability_density, "density must be positive");
    if (std::abs(mass - 1.0) > 1e-6)
        raise(errc::not_a_probability_density, "density must integrate to one");
    std::vector<double> s(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        double t = step * j;
        double x = g.invert_point(t);
        s[static_cast<size_t>(j)] = eval_real(u, x) / g.deriv(x);
    }
    return fit_trig(s, degree).trimmed();
}

/// Orbit pairing of the symplectic structure family at the base point
/// (a dt^2, b): a * integral of [u,v] + b * gelfand_fuchs(u,v), with circle
/// integrals in units of 2 pi.
template <class C>
C kks_form(const C& a, const C& b, const FourierField<C>& u, const FourierField<C>& v) {
    return a * vect_bracket(u, v).coef.mean() + b * gelfand_fuchs(u, v);
}

// --------------------------------------------------------------------------
// serialization: `diffeo <orientation> <K>` then constant, then per harmonic
// a cos/sin coefficient pair
// --------------------------------------------------------------------------

inline void write_diffeo(std::ostream& os, const CircleDiffeo& g) {
    const TrigPoly<CD>& p = g.periodic_part();
    os << "diffeo " << (g.orientation() > 0 ? "+" : "-") << " " << p.degree() << "\n";
    os << format_double(p.mode(0).real()) << "\n";
    for (int k = 1; k <= p.degree(); ++k)
        os << format_double(p.cos_coeff(k).real()) << " " << format_double(p.sin_coeff(k).real())
           << "\n";
}

inline CircleDiffeo read_diffeo(std::istream& is, DiffeoConfig cfg = DiffeoConfig{}) {
    std::string tag, ori;
    int deg;
    if (!(is >> tag) || tag != "diffeo") raise(errc::bad_input, "expected 'diffeo' header");
    if (!(is >> ori >> deg)) raise(errc::bad_input, "malformed diffeo header");
    double a0;
    if (!(is >> a0)) raise(errc::bad_input, "missing diffeo constant term");
    std::vector<CD> cosc, sinc;
    for (int k = 1; k <= deg; ++k) {
        double a, b;
        if (!(is >> a >> b)) raise(errc::bad_input, "missing diffeo coefficient");
        cosc.emplace_back(a, 0.0);
        sinc.emplace_back(b, 0.0);
    }
    TrigPoly<CD> p = TrigPoly<CD>::from_real_coeffs(CD(a0, 0.0), cosc, sinc);
    return CircleDiffeo(p, ori == "-" ? -1 : +1, cfg);
}

} // namespace virgeo

#endif
