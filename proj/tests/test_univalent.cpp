#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "virgeo/prng.hpp"
#include "virgeo/univalent.hpp"

using namespace virgeo;

namespace {

constexpr double TAU = 2.0 * std::numbers::pi;

UnivalentPoint<CD> random_point(Prng& rng, int n, double scale = 0.3) {
    UnivalentPoint<CD> x = UnivalentPoint<CD>::identity(n);
    for (int k = 1; k <= n; ++k)
        x.c[static_cast<size_t>(k - 1)] =
            CD(rng.uniform(-scale, scale), rng.uniform(-scale, scale)) / static_cast<double>(k);
    return x;
}

QPoly cvar(int n, int k) { return QPoly::var(n, k - 1, Rational(1)); } // c_k

} // namespace

TEST_CASE("oracle reproduces the closed-form rules for p >= 0") {
    int n = 10;
    // L_0 = sum k c_k d/dc_k
    LpOperator l0 = lp_operator(0, n);
    for (int k = 1; k <= n; ++k) CHECK(l0.dc[static_cast<size_t>(k - 1)] == cvar(n, k).scaled(Rational(k)));

    // L_p = d/dc_p + sum (k+1) c_k d/dc_{k+p} for p > 0
    for (int p = 1; p <= 4; ++p) {
        LpOperator lp = lp_operator(p, n);
        for (int j = 1; j <= n; ++j) {
            QPoly expect(n);
            if (j == p) expect += QPoly::constant(n, Rational(1));
            if (j - p >= 1) expect += cvar(n, j - p).scaled(Rational(j - p + 1));
            CHECK(lp.dc[static_cast<size_t>(j - 1)] == expect);
        }
    }
}

TEST_CASE("oracle negative rules have the expected polynomial structure") {
    int n = 8;
    // L_{-1} c_k component: (k+2) c_{k+1} - 2 c_1 c_k
    LpOperator lm1 = lp_operator(-1, n);
    for (int k = 1; k <= lm1.valid_components(); ++k) {
        QPoly expect = cvar(n, k + 1).scaled(Rational(k + 2)) - (cvar(n, 1) * cvar(n, k)).scaled(Rational(2));
        CHECK(lm1.dc[static_cast<size_t>(k - 1)] == expect);
    }

    // L_{-2} first component: 5 c_3 - 6 c_1 c_2 + 2 c_1^3
    LpOperator lm2 = lp_operator(-2, n);
    QPoly expect = cvar(n, 3).scaled(Rational(5)) - (cvar(n, 1) * cvar(n, 2)).scaled(Rational(6)) +
                   (cvar(n, 1) * cvar(n, 1) * cvar(n, 1)).scaled(Rational(2));
    CHECK(lm2.dc[0] == expect);
}

TEST_CASE("the B_k in the L_{-2} rule are the Laurent coefficients of 1/(w f(w))") {
    int n = 9;
    LpOperator lm2 = lp_operator(-2, n);
    // back-solve B_k = (k+3) c_{k+2} - (4 c_2 - c_1^2) c_k - delta_k
    QPoly four_c2 = cvar(n, 2).scaled(Rational(4)) - cvar(n, 1) * cvar(n, 1);
    // 1/(w f(w)) = w^{-2} / Y(w): compare against the w^k coefficient
    using PS = TruncatedSeries<QPoly>;
    PS y = PS::zero(0, n, QPoly(n));
    y.set(0, QPoly::constant(n, Rational(1)));
    for (int k = 1; k <= n; ++k) y.set(k, cvar(n, k));
    PS yinv = y.inverse();
    for (int k = 1; k <= lm2.valid_components() - 2; ++k) {
        QPoly bk = cvar(n, k + 2).scaled(Rational(k + 3)) - four_c2 * cvar(n, k) -
                   lm2.dc[static_cast<size_t>(k - 1)];
        CHECK(bk == yinv.coeff(k + 2)); // [w^k] of w^{-2} Y^{-1}
    }
}

TEST_CASE("commutator relations hold exactly (rational mode)") {
    int n = 12;
    for (int m = -4; m <= 4; ++m)
        for (int k = m; k <= 4; ++k) CHECK(commutator_residual(m, k, n) == 0.0);
}

TEST_CASE("iterated-ad construction matches the residue oracle") {
    int n = 12;
    for (int p = 3; p <= 6; ++p) {
        LpOperator ad = lp_operator_ad(-p, n);
        LpOperator oracle = lp_operator(-p, n);
        int valid = std::min(ad.valid_components(), oracle.valid_components());
        CHECK(valid >= 1);
        for (int k = 1; k <= valid; ++k)
            CHECK(ad.dc[static_cast<size_t>(k - 1)] == oracle.dc[static_cast<size_t>(k - 1)]);
    }
}

TEST_CASE("numeric action at the identity point") {
    int n = 8;
    UnivalentPoint<CD> id = UnivalentPoint<CD>::identity(n);
    for (int p = 1; p <= 4; ++p) {
        std::vector<CD> d = lv_action(FourierField<CD>::e(p), id);
        for (int k = 1; k <= n; ++k)
            CHECK(std::abs(d[static_cast<size_t>(k - 1)] - (k == p ? CD(1.0) : CD(0.0))) < 1e-14);
    }
    // e_0 at a generic point gives k c_k
    Prng rng(5);
    UnivalentPoint<CD> x = random_point(rng, n);
    std::vector<CD> d0 = lv_action(FourierField<CD>::e(0), x);
    for (int k = 1; k <= n; ++k)
        CHECK(std::abs(d0[static_cast<size_t>(k - 1)] - static_cast<double>(k) * x.c[static_cast<size_t>(k - 1)]) < 1e-13);
}

TEST_CASE("numeric action matches symbolic rules on random points") {
    int n = 10;
    Prng rng(42);
    for (int p = -4; p <= 4; ++p) {
        LpOperator op = lp_operator(p, n);
        for (int iter = 0; iter < 5; ++iter) {
            UnivalentPoint<CD> x = random_point(rng, n);
            std::vector<CD> direct = lv_action(FourierField<CD>::e(p), x);
            std::vector<CD> via_rules = apply_rules(op, x);
            for (int k = 0; k < op.valid_components(); ++k)
                CHECK(std::abs(direct[static_cast<size_t>(k)] - via_rules[static_cast<size_t>(k)]) < 1e-11);
        }
    }
}

TEST_CASE("koebe point") {
    UnivalentPoint<CD> k0 = koebe_point(0.0, 8);
    for (int k = 1; k <= 8; ++k) CHECK(std::abs(k0.coeff(k) - CD(k + 1, 0.0)) < 1e-15);
    UnivalentPoint<CD> kpi = koebe_point(std::numbers::pi, 8);
    for (int k = 1; k <= 8; ++k)
        CHECK(std::abs(kpi.coeff(k) - CD((k % 2 ? -1.0 : 1.0) * (k + 1), 0.0)) < 1e-12);
    UnivalentPoint<CD> kth = koebe_point(0.77, 8);
    for (int k = 1; k <= 8; ++k) CHECK(std::abs(std::abs(kth.coeff(k)) - (k + 1)) < 1e-12);
}

TEST_CASE("flow by e_0 scales coefficients by diagonal eigenvalues") {
    int n = 6;
    UnivalentPoint<CD> x = koebe_point(0.3, n);
    double tau = 0.2;
    UnivalentPoint<CD> y = flow_on_S(FourierField<CD>::e(0), tau, x, 512);
    for (int k = 1; k <= n; ++k) {
        CD expect = x.coeff(k) * std::exp(k * tau);
        CHECK(std::abs(y.coeff(k) - expect) < 1e-9);
    }
    UnivalentPoint<CD> z = flow_on_S(FourierField<CD>::s(2), 0.0, x);
    for (int k = 1; k <= n; ++k) CHECK(z.coeff(k) == x.coeff(k));
}

TEST_CASE("flow semigroup property") {
    int n = 8;
    Prng rng(9);
    UnivalentPoint<CD> x = random_point(rng, n, 0.2);
    FourierField<CD> v = FourierField<CD>::s(1) + FourierField<CD>::c(2) * CD(0.5, 0.0);
    UnivalentPoint<CD> a = flow_on_S(v, 0.08, flow_on_S(v, 0.05, x));
    UnivalentPoint<CD> b = flow_on_S(v, 0.13, x);
    for (int k = 1; k <= n; ++k) CHECK(std::abs(a.coeff(k) - b.coeff(k)) < 1e-8);
}

TEST_CASE("flow matches the infinitesimal action to first order") {
    int n = 8;
    Prng rng(14);
    UnivalentPoint<CD> x = random_point(rng, n, 0.2);
    FourierField<CD> v = FourierField<CD>::s(2) + FourierField<CD>::c(1) * CD(0.7, 0.0);
    std::vector<CD> d = lv_action(v, x);
    auto defect = [&](double h) {
        UnivalentPoint<CD> y = flow_on_S(v, h, x);
        double m = 0.0;
        for (int k = 1; k <= n; ++k)
            m = std::max(m, std::abs(y.coeff(k) - x.coeff(k) - h * d[static_cast<size_t>(k - 1)]));
        return m;
    };
    double e1 = defect(0.02), e2 = defect(0.01);
    CHECK(e1 / e2 > 3.0); // O(h^2) halving ratio ~ 4
    CHECK(e1 / e2 < 5.0);
}

TEST_CASE("poisson mean value on the koebe disk") {
    int n = 6;
    // F = Re c_1: center 0, average 0
    CFunctional f1 = CFunctional::var(n, 0, CD(1.0));
    auto [c1, a1] = poisson_average(f1, 0.4, 256, n);
    CHECK(std::abs(c1) < 1e-14);
    CHECK(std::abs(a1) < 1e-13);

    // F = 1
    CFunctional one = CFunctional::constant(n, CD(1.0));
    auto [c2, a2] = poisson_average(one, 0.6, 128, n);
    CHECK(c2 == doctest::Approx(1.0));
    CHECK(a2 == doctest::Approx(1.0));

    // F = Re(c_2 - c_1^2)
    CFunctional f3 = CFunctional::var(n, 1, CD(1.0)) - CFunctional::var(n, 0, CD(1.0)) * CFunctional::var(n, 0, CD(1.0));
    auto [c3, a3] = poisson_average(f3, 0.3, 512, n);
    CHECK(std::abs(a3 - c3) < 1e-10);

    Prng rng(23);
    for (int iter = 0; iter < 10; ++iter) {
        CFunctional f(n);
        for (int t = 0; t < 5; ++t) {
            CFunctional term = CFunctional::constant(n, CD(rng.uniform(-1, 1), rng.uniform(-1, 1)));
            int deg = static_cast<int>(rng.uniform_int(1, 3));
            for (int d = 0; d < deg; ++d)
                term *= CFunctional::var(n, static_cast<int>(rng.uniform_int(0, n - 1)), CD(1.0));
            f += term;
        }
        for (double r : {0.3, 0.6}) {
            auto [c, a] = poisson_average(f, r, 512, n);
            CHECK(std::abs(c - a) < 1e-8);
        }
    }
}

TEST_CASE("maslov index") {
    CHECK(maslov_index(0.0, TAU / 3, 2 * TAU / 3) == 1);
    CHECK(maslov_index(0.0, 2 * TAU / 3, TAU / 3) == -1);
    CHECK_THROWS_AS(maslov_index(0.1, 0.2, 0.2), error);

    Prng rng(31);
    int done = 0;
    while (done < 100) {
        double a = rng.uniform(0, TAU), b = rng.uniform(0, TAU), c = rng.uniform(0, TAU);
        double eps = 1e-6;
        if (std::abs(a - b) < eps || std::abs(b - c) < eps || std::abs(a - c) < eps) continue;
        ++done;
        int m = maslov_index(a, b, c);
        CHECK(maslov_index(b, c, a) == m);
        CHECK(maslov_index(c, a, b) == m);
        CHECK(maslov_index(b, a, c) == -m);
        CHECK(maslov_index(a, c, b) == -m);
        CHECK(maslov_index(c, b, a) == -m);
    }
}

TEST_CASE("mirrors") {
    OrientedMirror m0 = OrientedMirror::at(0.0);
    CHECK(subsymmetry_involution_check(m0.s) < 1e-12);
    CHECK(mirror_parallel(m0, m0));

    // distinct fixed points of the same involution give non-parallel mirrors
    OrientedMirror m_pi(CircleDiffeo::reflection(0.0), std::numbers::pi);
    CHECK(!mirror_parallel(m0, m_pi));

    // rotation conjugates of s_- with matching absolute points are parallel
    OrientedMirror m1 = OrientedMirror::at(1.3);
    CircleDiffeo conj = diffeo_compose(
        CircleDiffeo::rotation(1.3),
        diffeo_compose(CircleDiffeo::reflection(0.0), CircleDiffeo::rotation(-1.3)));
    OrientedMirror m2(conj, 1.3);
    CHECK(mirror_parallel(m1, m2));
    CHECK(subsymmetry_involution_check(conj) < 1e-10);

    // a non-involutive map reports a large residual, not an error
    CircleDiffeo g(TrigPoly<CD>::sine(1) * CD(0.3, 0.0), +1);
    CHECK(subsymmetry_involution_check(g) > 0.1);
}

TEST_CASE("point serialization round trip") {
    Prng rng(3);
    UnivalentPoint<CD> x = random_point(rng, 7);
    std::stringstream ss;
    write_point(ss, x);
    UnivalentPoint<CD> y = read_point(ss);
    CHECK(y.truncation() == x.truncation());
    for (int k = 1; k <= 7; ++k) CHECK(y.coeff(k) == x.coeff(k));
}
