#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numbers>

#include "virgeo/neretin.hpp"
#include "virgeo/prng.hpp"
#include "virgeo/univalent.hpp"

using namespace virgeo;

namespace {

double elem_dist(const NeretinElement& a, const NeretinElement& b) {
    double m = 0;
    for (int k = 0; k <= std::min(a.pplus().order(), b.pplus().order()); ++k)
        m = std::max(m, std::abs(a.pplus().coeff(k) - b.pplus().coeff(k)));
    for (int k = std::max(a.pminus().low(), b.pminus().low()); k <= 1; ++k)
        m = std::max(m, std::abs(a.pminus().coeff(k) - b.pminus().coeff(k)));
    return m;
}

NeretinElement random_element(Prng& rng, double t, double eps) {
    std::vector<CD> pe, me;
    int np = 1 + static_cast<int>(rng.uniform_int(0, 1));
    int nm = 1 + static_cast<int>(rng.uniform_int(0, 1));
    for (int i = 0; i < np; ++i) pe.emplace_back(rng.uniform(-eps, eps), rng.uniform(-eps, eps));
    for (int i = 0; i < nm; ++i) me.emplace_back(rng.uniform(-eps, eps), rng.uniform(-eps, eps));
    return NeretinElement::perturbed_scaling(t, pe, me);
}

} // namespace

TEST_CASE("scaling family composes additively") {
    NeretinElement a = NeretinElement::scaling(0.4);
    NeretinElement b = NeretinElement::scaling(0.3);
    CHECK(elem_dist(multiply(a, b), NeretinElement::scaling(0.7)) < 1e-10);

    // boundary curves of A(t): circles of radii e^{-t} and 1
    NeretinElement g = NeretinElement::scaling(0.5);
    for (int j = 0; j < 64; ++j) {
        CD z = std::polar(1.0, 2.0 * std::numbers::pi * j / 64);
        CHECK(std::abs(std::abs(g.eval_plus(z)) - std::exp(-0.5)) < 1e-14);
        CHECK(std::abs(std::abs(g.eval_minus(z)) - 1.0) < 1e-14);
    }

    // commutativity within the scaling subfamily
    NeretinElement p1 = multiply(NeretinElement::scaling(0.7), NeretinElement::scaling(0.3));
    NeretinElement p2 = multiply(NeretinElement::scaling(0.5), NeretinElement::scaling(0.5));
    CHECK(elem_dist(p1, p2) < 1e-10);

    CHECK_THROWS_AS(NeretinElement::scaling(-0.1), error);
}

TEST_CASE("neutral seam") {
    Prng rng(3);
    NeretinElement g = random_element(rng, 0.5, 0.04);
    NeretinElement n = NeretinElement::neutral();
    CHECK(elem_dist(multiply(g, n), g) < 1e-8);
    CHECK(elem_dist(multiply(n, g), g) < 1e-8);
}

TEST_CASE("near-identity products are first-order consistent") {
    double s = 0.5, t = 0.4;
    auto prod_at = [&](double eps) {
        NeretinElement g1 = NeretinElement::perturbed_scaling(s, {CD(eps, 0.5 * eps)}, {CD(-eps, 0.3 * eps)});
        NeretinElement g2 = NeretinElement::perturbed_scaling(t, {CD(0.7 * eps, -eps)}, {CD(0.2 * eps, eps)});
        return multiply(g1, g2);
    };
    NeretinElement base = NeretinElement::scaling(s + t);
    double eps = 1e-3;
    NeretinElement full = prod_at(eps);
    NeretinElement half = prod_at(0.5 * eps);
    // linear extrapolation from eps/2 matches the eps product to O(eps^2)
    double m = 0.0;
    for (int k = 0; k <= 32; ++k) {
        CD lin = base.pplus().coeff(k) + 2.0 * (half.pplus().coeff(k) - base.pplus().coeff(k));
        m = std::max(m, std::abs(full.pplus().coeff(k) - lin));
    }
    for (int k = -32; k <= 1; ++k) {
        CD lin = base.pminus().coeff(k) + 2.0 * (half.pminus().coeff(k) - base.pminus().coeff(k));
        m = std::max(m, std::abs(full.pminus().coeff(k) - lin));
    }
    CHECK(m < 5.0 * eps * eps);
    CHECK(elem_dist(full, base) > 1e-4); // the perturbation is genuinely there
}

TEST_CASE("associativity on the near-identity family") {
    Prng rng(11);
    for (int iter = 0; iter < 3; ++iter) {
        NeretinElement g1 = random_element(rng, rng.uniform(0.2, 1.0), 0.05);
        NeretinElement g2 = random_element(rng, rng.uniform(0.2, 1.0), 0.05);
        NeretinElement g3 = random_element(rng, rng.uniform(0.2, 1.0), 0.05);
        NeretinElement lhs = multiply(multiply(g1, g2), g3);
        NeretinElement rhs = multiply(g1, multiply(g2, g3));
        CHECK(elem_dist(lhs, rhs) < 1e-6);
    }
}

TEST_CASE("modulus grows under gluing") {
    Prng rng(7);
    NeretinElement g1 = random_element(rng, 0.5, 0.04);
    NeretinElement g2 = random_element(rng, 0.35, 0.04);
    double m1 = element_modulus(g1);
    double m2 = element_modulus(g2);
    double m12 = element_modulus(multiply(g1, g2));
    CHECK(m1 > 0.4);
    CHECK(m12 > std::max(m1, m2));
    CHECK(m12 > m1 + m2 - 0.05); // superadditivity up to solver slack
}

TEST_CASE("normal form of the identity reparametrization") {
    FormalProduct fp = make_formal_product(CircleDiffeo::identity(), 0.3, CircleDiffeo::identity());
    FormalProduct nf = normal_form(fp, 0.4);
    CHECK(nf.t == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(std::abs(nf.p.periodic_part().mode(0)) < 1e-10);
    CHECK(std::abs(nf.q.periodic_part().mode(0)) < 1e-10);
}

TEST_CASE("rotations pass through the normal form") {
    double alpha = 0.7;
    FormalProduct fp = make_formal_product(CircleDiffeo::rotation(alpha), 0.5, CircleDiffeo::identity());
    FormalProduct nf = normal_form(fp, 0.4);
    CHECK(nf.t == doctest::Approx(0.9).epsilon(1e-9));
    // p'(1) = 1 normalization pushes the rotation into q': alpha' + alpha'' = alpha
    double aprime = angle_mod_tau(nf.p(0.0));
    double asecond = angle_mod_tau(nf.q(0.0));
    CHECK(OrientedMirror::circle_distance(aprime + asecond, alpha) < 1e-8);
}

TEST_CASE("perturbed normal form: modulus is stationary") {
    auto tshift = [](double amp) {
        TrigPoly<CD> per = TrigPoly<CD>::sine(1) * CD(amp, 0.0) + TrigPoly<CD>::cosine(2) * CD(0.6 * amp, 0.0);
        CircleDiffeo p(per, +1);
        FormalProduct nf = normal_form(make_formal_product(p, 0.5, CircleDiffeo::identity()), 0.4);
        return std::abs(nf.t - 0.9);
    };
    double d1 = tshift(0.08), d2 = tshift(0.04);
    CHECK(d1 < 0.08 * 0.08);       // t' = s + t + O(eps^2)
    CHECK(d1 / d2 > 3.0);          // quadratic scaling in the amplitude
    CHECK(d1 / d2 < 5.0);
}

TEST_CASE("normal form is consistent with the pair product") {
    TrigPoly<CD> per = TrigPoly<CD>::sine(1) * CD(0.08, 0.0) + TrigPoly<CD>::cosine(2) * CD(0.05, 0.0);
    CircleDiffeo p(per, +1);
    FormalProduct fp = make_formal_product(p, 0.5, CircleDiffeo::identity());
    FormalProduct nf = normal_form(fp, 0.4);
    NeretinElement lhs = formal_to_element(nf);
    NeretinElement rhs = multiply(NeretinElement::scaling(0.4), formal_to_element(fp));
    CHECK(elem_dist(lhs, rhs) < 1e-6);
}

TEST_CASE("splitting rule engages for rough reparametrizations") {
    // large t with a strong harmonic forces the Eq-style chunking
    TrigPoly<CD> per = TrigPoly<CD>::sine(3) * CD(0.12, 0.0);
    CircleDiffeo p(per, +1);
    FormalProduct fp = make_formal_product(p, 1.4, CircleDiffeo::identity());
    DiffeoExtension ext(p);
    CHECK(ext.distortion(1.4) > 0.5); // the single-piece route is infeasible
    FormalProduct nf = normal_form(fp, 0.3);
    CHECK(nf.t > 1.55);
    CHECK(nf.t < 1.75);
}

TEST_CASE("cocycle values on the scaling family and the neutral element") {
    CD c0 = neretin_cocycle(NeretinElement::scaling(0.4), NeretinElement::scaling(0.3));
    CHECK(std::abs(c0) < 1e-12);
    Prng rng(5);
    NeretinElement g = random_element(rng, 0.5, 0.04);
    CHECK(std::abs(neretin_cocycle(g, NeretinElement::neutral())) < 1e-12);
    CHECK(std::abs(neretin_cocycle(NeretinElement::neutral(), g)) < 1e-12);
}

TEST_CASE("cocycle identity on near-identity triples") {
    Prng rng(19);
    for (int iter = 0; iter < 2; ++iter) {
        NeretinElement g1 = random_element(rng, rng.uniform(0.3, 0.8), 0.05);
        NeretinElement g2 = random_element(rng, rng.uniform(0.3, 0.8), 0.05);
        NeretinElement g3 = random_element(rng, rng.uniform(0.3, 0.8), 0.05);
        NeretinElement p12 = multiply(g1, g2);
        NeretinElement p23 = multiply(g2, g3);
        CD defect = neretin_cocycle(g1, g2) + neretin_cocycle(p12, g3) -
                    neretin_cocycle(g1, p23) - neretin_cocycle(g2, g3);
        CHECK(std::abs(defect) < 1e-5);
        CHECK(std::abs(neretin_cocycle(g1, g2)) > 1e-9); // nontrivial on this family
    }
}

TEST_CASE("boundary data of circle maps") {
    BoundaryDatum id_datum = embed_diffeo(CircleDiffeo::identity());
    CHECK(std::abs(id_datum.curve.mode(1) - CD(1.0)) < 1e-12);
    for (int k = 2; k <= 5; ++k) CHECK(std::abs(id_datum.curve.mode(k)) < 1e-12);

    TrigPoly<CD> per = TrigPoly<CD>::sine(1) * CD(0.2, 0.0);
    BoundaryDatum d = embed_diffeo(CircleDiffeo(per, +1));
    CHECK(std::abs(d.curve.mode(1)) > 0.5);

    // series curves: z, e^{-t} z, z + 0.1 z^2 are valid boundary data
    TruncatedSeries<CD> idz = TruncatedSeries<CD>::zero(0, 4);
    idz.set(1, CD(1.0));
    CHECK(std::abs(boundary_datum_from_series(idz).curve.mode(1) - CD(1.0)) < 1e-14);
    TruncatedSeries<CD> sc = idz;
    sc.set(1, CD(std::exp(-0.4), 0.0));
    CHECK_NOTHROW(boundary_datum_from_series(sc));
    TruncatedSeries<CD> quad = idz;
    quad.set(2, CD(0.1, 0.0));
    CHECK_NOTHROW(boundary_datum_from_series(quad));

    // winding/immersion failures
    TruncatedSeries<CD> bad = idz;
    bad.set(2, CD(0.6, 0.0)); // derivative vanishes inside the closed disk boundary
    CHECK_THROWS_AS(boundary_datum_from_series(bad), error);
    TruncatedSeries<CD> off = TruncatedSeries<CD>::zero(0, 3);
    off.set(0, CD(5.0, 0.0));
    off.set(1, CD(1.0, 0.0)); // does not wind around zero
    CHECK_THROWS_AS(boundary_datum_from_series(off), error);
}

TEST_CASE("element validation rejects intersecting boundary data") {
    TruncatedSeries<CD> plus = TruncatedSeries<CD>::zero(0, 8);
    plus.set(1, CD(1.0, 0.0)); // pplus curve = pminus curve = unit circle
    TruncatedSeries<CD> minus = TruncatedSeries<CD>::zero(-8, 1);
    minus.set(1, CD(1.0, 0.0));
    CHECK_THROWS_AS(NeretinElement(plus, minus), error);
}

TEST_CASE("element serialization round trip") {
    Prng rng(23);
    NeretinElement g = random_element(rng, 0.45, 0.03);
    std::stringstream ss;
    write_element(ss, g);
    NeretinElement h = read_element(ss);
    CHECK(elem_dist(g, h) < 1e-16);
}
