#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "virgeo/matrix.hpp"
#include "virgeo/prng.hpp"

using namespace virgeo;

TEST_CASE("hermitian eigenvalues of a diagonal matrix") {
    CMatrix d(3, 3);
    d(0, 0) = 2.0;
    d(1, 1) = -1.0;
    d(2, 2) = 0.5;
    auto ev = hermitian_eigenvalues(d);
    CHECK(ev[0] == doctest::Approx(-1.0));
    CHECK(ev[1] == doctest::Approx(0.5));
    CHECK(ev[2] == doctest::Approx(2.0));
}

TEST_CASE("hermitian eigenvalues of a known 2x2") {
    // [[1, i],[-i, 1]] has eigenvalues 0 and 2
    CMatrix h(2, 2);
    h(0, 0) = 1.0;
    h(1, 1) = 1.0;
    h(0, 1) = CD(0.0, 1.0);
    h(1, 0) = CD(0.0, -1.0);
    auto ev = hermitian_eigenvalues(h);
    CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(ev[1] == doctest::Approx(2.0));
}

TEST_CASE("eigenvalues invariant: trace and unitarity defects") {
    Prng rng(31);
    for (int iter = 0; iter < 10; ++iter) {
        int n = 6;
        CMatrix h(n, n);
        for (int i = 0; i < n; ++i) {
            h(i, i) = rng.uniform(-1, 1);
            for (int j = i + 1; j < n; ++j) {
                CD v(rng.uniform(-1, 1), rng.uniform(-1, 1));
                h(i, j) = v;
                h(j, i) = std::conj(v);
            }
        }
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += h(i, i).real();
        auto ev = hermitian_eigenvalues(h);
        double s = 0.0;
        for (double e : ev) s += e;
        CHECK(s == doctest::Approx(tr).epsilon(1e-10));
    }
}

TEST_CASE("non-hermitian input is rejected") {
    CMatrix h(2, 2);
    h(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eigenvalues(h), error);
}

TEST_CASE("operator norm") {
    CMatrix a(2, 2);
    a(0, 0) = 3.0; // diag(3, 4): norm 4
    a(1, 1) = CD(0.0, 4.0);
    CHECK(operator_norm(a) == doctest::Approx(4.0));
}

TEST_CASE("complex linear solve") {
    Prng rng(77);
    int n = 8;
    CMatrix a(n, n);
    std::vector<CD> x(n);
    for (int i = 0; i < n; ++i) {
        x[static_cast<size_t>(i)] = CD(rng.uniform(-1, 1), rng.uniform(-1, 1));
        for (int j = 0; j < n; ++j) a(i, j) = CD(rng.uniform(-1, 1), rng.uniform(-1, 1));
        a(i, i) += 4.0;
    }
    std::vector<CD> b(n);
    for (int i = 0; i < n; ++i) {
        CD acc = 0.0;
        for (int j = 0; j < n; ++j) acc += a(i, j) * x[static_cast<size_t>(j)];
        b[static_cast<size_t>(i)] = acc;
    }
    auto got = solve_linear(a, b);
    for (int i = 0; i < n; ++i)
        CHECK(std::abs(got[static_cast<size_t>(i)] - x[static_cast<size_t>(i)]) < 1e-12);
}
