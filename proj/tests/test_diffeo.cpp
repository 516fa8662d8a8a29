#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "virgeo/diffeo.hpp"
#include "virgeo/prng.hpp"

using namespace virgeo;

namespace {

constexpr double TAU = 2.0 * std::numbers::pi;

CircleDiffeo random_diffeo(Prng& rng, double amp, int harmonics = 3,
                           DiffeoConfig cfg = DiffeoConfig{}) {
    TrigPoly<CD> p(harmonics);
    p.set_mode(0, CD(rng.uniform(-1.0, 1.0), 0.0));
    for (int k = 1; k <= harmonics; ++k) {
        double a = rng.uniform(-amp, amp) / k;
        double b = rng.uniform(-amp, amp) / k;
        p.set_mode(k, CD(0.5 * a, -0.5 * b));
        p.set_mode(-k, CD(0.5 * a, 0.5 * b));
    }
    return CircleDiffeo(p, +1, cfg);
}

double sup_distance(const CircleDiffeo& a, const CircleDiffeo& b) {
    double m = 0.0;
    for (int j = 0; j < a.grid(); ++j) {
        double t = TAU * j / a.grid();
        m = std::max(m, std::abs(a(t) - b(t)));
    }
    return m;
}

CircleDiffeo sine_diffeo(double amp, int harmonic = 1) {
    TrigPoly<CD> p = TrigPoly<CD>::sine(harmonic) * CD(amp, 0.0);
    return CircleDiffeo(p, +1);
}

} // namespace

TEST_CASE("rotation composition adds angles") {
    CircleDiffeo r1 = CircleDiffeo::rotation(0.4);
    CircleDiffeo r2 = CircleDiffeo::rotation(1.1);
    CircleDiffeo c = diffeo_compose(r1, r2);
    CHECK(sup_distance(c, CircleDiffeo::rotation(1.5)) < 1e-12);
}

TEST_CASE("inversion") {
    CHECK(sup_distance(diffeo_invert(CircleDiffeo::identity()), CircleDiffeo::identity()) < 1e-12);

    CircleDiffeo g = sine_diffeo(0.3);
    CircleDiffeo gi = diffeo_invert(g);
    CircleDiffeo gg = diffeo_compose(g, gi);
    CHECK(sup_distance(gg, CircleDiffeo::identity()) < 1e-10);

    // orientation-reversing involution s(t) = -t inverts to itself
    CircleDiffeo s = CircleDiffeo::reflection(0.0);
    CHECK(sup_distance(diffeo_invert(s), s) < 1e-10);
}

TEST_CASE("group axioms on random diffeos") {
    Prng rng(21);
    for (int iter = 0; iter < 8; ++iter) {
        CircleDiffeo a = random_diffeo(rng, 0.15, 2);
        CircleDiffeo b = random_diffeo(rng, 0.15, 2);
        CircleDiffeo c = random_diffeo(rng, 0.15, 2);
        CHECK(sup_distance(diffeo_compose(diffeo_compose(a, b), c),
                           diffeo_compose(a, diffeo_compose(b, c))) < 1e-9);
        CHECK(sup_distance(diffeo_compose(a, diffeo_invert(a)), CircleDiffeo::identity()) < 1e-9);
        CHECK(sup_distance(diffeo_compose(diffeo_invert(a), a), CircleDiffeo::identity()) < 1e-9);
    }
}

TEST_CASE("flow of the constant field is a rotation") {
    CircleDiffeo f = flow_exp(FourierField<CD>::h(), 0.7);
    CHECK(sup_distance(f, CircleDiffeo::rotation(0.7)) < 1e-10);
    CircleDiffeo f0 = flow_exp(FourierField<CD>::s(1), 0.0);
    CHECK(sup_distance(f0, CircleDiffeo::identity()) < 1e-14);
}

TEST_CASE("flow property of s_1") {
    FourierField<CD> v = FourierField<CD>::s(1);
    CircleDiffeo a = flow_exp(v, 0.1);
    CircleDiffeo b = flow_exp(v, 0.15);
    CircleDiffeo ab = diffeo_compose(a, b);
    CircleDiffeo c = flow_exp(v, 0.25);
    CHECK(sup_distance(ab, c) < 1e-8);
}

TEST_CASE("bott cocycle basic values") {
    CircleDiffeo g = sine_diffeo(0.2);
    CHECK(std::abs(bott_cocycle(CircleDiffeo::identity(), g)) < 1e-12);
    CHECK(std::abs(bott_cocycle(g, CircleDiffeo::identity())) < 1e-12);
    CHECK(std::abs(bott_cocycle(CircleDiffeo::rotation(0.3), CircleDiffeo::rotation(1.2))) < 1e-12);
}

TEST_CASE("bott cocycle identity on random triples") {
    Prng rng(4);
    for (int iter = 0; iter < 10; ++iter) {
        CircleDiffeo g1 = random_diffeo(rng, 0.2);
        CircleDiffeo g2 = random_diffeo(rng, 0.2);
        CircleDiffeo g3 = random_diffeo(rng, 0.2);
        double r = bott_cocycle(g1, g2) + bott_cocycle(diffeo_compose(g1, g2), g3) -
                   bott_cocycle(g1, diffeo_compose(g2, g3)) - bott_cocycle(g2, g3);
        CHECK(std::abs(r) < 1e-7);
    }
}

TEST_CASE("schwarzian of rotations vanishes; chain rule holds") {
    CHECK(schwarzian(CircleDiffeo::rotation(0.9)).is_zero());
    Prng rng(8);
    for (int iter = 0; iter < 6; ++iter) {
        CircleDiffeo g1 = random_diffeo(rng, 0.2);
        CircleDiffeo g2 = random_diffeo(rng, 0.2);
        CircleDiffeo g12 = diffeo_compose(g1, g2);
        TrigPoly<CD> lhs = schwarzian(g12);
        TrigPoly<CD> s1 = schwarzian(g1), s2 = schwarzian(g2);
        double m = 0.0;
        for (int j = 0; j < 512; ++j) {
            double t = TAU * j / 512;
            double d2 = g2.deriv(t);
            double rhs = eval_real(s1, g2(t)) * d2 * d2 + eval_real(s2, t);
            m = std::max(m, std::abs(eval_real(lhs, t) - rhs));
        }
        CHECK(m < 1e-9);
    }
}

TEST_CASE("schwarzian of a Moebius series is exactly zero") {
    using GR = GaussianRational;
    using QS = TruncatedSeries<GR>;
    auto q = [](long long n, long long d = 1) { return GR(Rational(n, d)); };
    // (a z + b) / (c z + d) as an exact rational series
    int n = 14;
    QS num = QS::zero(0, n), den = QS::zero(0, n);
    num.set(0, q(3));
    num.set(1, q(2));
    den.set(0, q(5));
    den.set(1, q(-1));
    QS moebius = num / den;
    QS s = schwarzian_series(moebius);
    CHECK(s.is_zero());

    // identity map
    CHECK(schwarzian_series(QS::identity(8, q(0))).is_zero());

    // a non-Moebius map has nonzero schwarzian
    QS k = QS::zero(1, 8);
    k.set(1, q(1));
    k.set(2, q(2));
    CHECK(!schwarzian_series(k).is_zero());
}

TEST_CASE("coadjoint action") {
    CoadjointVector x{TrigPoly<CD>::constant(CD(0.8, 0.0)) + TrigPoly<CD>::cosine(1) * CD(0.1, 0.0),
                      0.7};
    CoadjointVector y = coadjoint_act(CircleDiffeo::identity(), x);
    double m_id = 0.0;
    for (int j = 0; j < 256; ++j) {
        double t = TAU * j / 256;
        m_id = std::max(m_id, std::abs(eval_real(y.p, t) - eval_real(x.p, t)));
    }
    CHECK(m_id < 1e-12);
    CHECK(y.b == x.b);

    // rotations with constant density: S = 0 and p is rotation invariant
    CoadjointVector cst{TrigPoly<CD>::constant(CD(0.5, 0.0)), 1.3};
    CoadjointVector z = coadjoint_act(CircleDiffeo::rotation(0.9), cst);
    double m = 0.0;
    for (int j = 0; j < 256; ++j)
        m = std::max(m, std::abs(eval_real(z.p, TAU * j / 256) - 0.5));
    CHECK(m < 1e-11);
    CHECK(z.b == 1.3);
}

TEST_CASE("coadjoint group law") {
    Prng rng(12);
    for (int iter = 0; iter < 6; ++iter) {
        CircleDiffeo g1 = random_diffeo(rng, 0.15);
        CircleDiffeo g2 = random_diffeo(rng, 0.15);
        CoadjointVector x{TrigPoly<CD>::constant(CD(1.0, 0.0)) +
                              TrigPoly<CD>::cosine(2) * CD(0.3, 0.0) +
                              TrigPoly<CD>::sine(1) * CD(0.2, 0.0),
                          0.9};
        // the transform composes contravariantly: K(g1 . g2) applies K(g1) first
        CoadjointVector lhs = coadjoint_act(diffeo_compose(g1, g2), x);
        CoadjointVector rhs = coadjoint_act(g2, coadjoint_act(g1, x));
        double m = 0.0;
        for (int j = 0; j < 512; ++j) {
            double t = TAU * j / 512;
            m = std::max(m, std::abs(eval_real(lhs.p, t) - eval_real(rhs.p, t)));
        }
        CHECK(m < 1e-7);
        CHECK(lhs.b == rhs.b);
    }
}

TEST_CASE("density action preserves mass and positivity") {
    const double inv2pi = 1.0 / TAU;
    TrigPoly<CD> u = TrigPoly<CD>::constant(CD(inv2pi, 0.0)) +
                     TrigPoly<CD>::cosine(1) * CD(0.5 * inv2pi, 0.0);
    CircleDiffeo id = CircleDiffeo::identity();
    TrigPoly<CD> same = density_act(id, u);
    double m0 = 0.0;
    for (int j = 0; j < 512; ++j) {
        double t = TAU * j / 512;
        m0 = std::max(m0, std::abs(eval_real(same, t) - eval_real(u, t)));
    }
    CHECK(m0 < 1e-12);

    // rotation transports the density
    double alpha = 1.1;
    TrigPoly<CD> rotated = density_act(CircleDiffeo::rotation(alpha), u);
    double m = 0.0;
    for (int j = 0; j < 512; ++j) {
        double t = TAU * j / 512;
        m = std::max(m, std::abs(eval_real(rotated, t) - eval_real(u, t - alpha)));
    }
    CHECK(m < 1e-10);

    Prng rng(19);
    for (int iter = 0; iter < 5; ++iter) {
        CircleDiffeo g = random_diffeo(rng, 0.2);
        TrigPoly<CD> w = density_act(g, u);
        CHECK(std::abs(w.mean().real() * TAU - 1.0) < 1e-10);
        for (int j = 0; j < 256; ++j) CHECK(eval_real(w, TAU * j / 256) > 0.0);
    }

    TrigPoly<CD> bad = TrigPoly<CD>::constant(CD(inv2pi, 0.0)) +
                       TrigPoly<CD>::cosine(1) * CD(2.0 * inv2pi, 0.0);
    CHECK_THROWS_AS(density_act(id, bad), error);
}

TEST_CASE("kks form") {
    using GR = GaussianRational;
    using F = FourierField<GR>;
    auto q = [](long long n, long long d = 1) { return GR(Rational(n, d)); };
    GR a = q(2), b = q(1, 3);
    F u = F::s(2) + F::c(1) * q(1, 2);
    CHECK(scalar_traits<GR>::is_zero(kks_form(a, b, u, u)));
    for (int j = -4; j <= 4; ++j)
        for (int k = -4; k <= 4; ++k) {
            if (j + k == 0) continue;
            CHECK(scalar_traits<GR>::is_zero(kks_form(a, b, F::e(j), F::e(k))));
        }
    // a-part integral of [h, s_1] = c_1 has zero mean
    CHECK(scalar_traits<GR>::is_zero(kks_form(q(1), q(0), F::h(), F::s(1))));
    // antisymmetry on a random pair
    F v = F::c(2) + F::s(1) * q(3, 4);
    CHECK(scalar_traits<GR>::is_zero(kks_form(a, b, u, v) + kks_form(a, b, v, u)));
}

TEST_CASE("diffeo serialization round trip") {
    CircleDiffeo g = sine_diffeo(0.25, 2);
    std::stringstream ss;
    write_diffeo(ss, g);
    CircleDiffeo h = read_diffeo(ss);
    CHECK(h.orientation() == g.orientation());
    CHECK(sup_distance(g, h) < 1e-15);

    CircleDiffeo s = CircleDiffeo::reflection(0.4);
    std::stringstream s2;
    write_diffeo(s2, s);
    CircleDiffeo s_back = read_diffeo(s2);
    CHECK(s_back.orientation() == -1);
    CHECK(sup_distance(s, s_back) < 1e-15);
}

TEST_CASE("derivative margin violations are rejected") {
    TrigPoly<CD> p = TrigPoly<CD>::sine(1) * CD(1.2, 0.0); // g' changes sign
    CHECK_THROWS_AS(CircleDiffeo(p, +1), error);
}
