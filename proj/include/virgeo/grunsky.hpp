#ifndef VIRGEO_GRUNSKY_HPP
#define VIRGEO_GRUNSKY_HPP

#include <cmath>
#include <utility>
#include <vector>

#include "virgeo/matrix.hpp"
#include "virgeo/series.hpp"
#include "virgeo/univalent.hpp"

namespace virgeo {

/// Mixed coefficients b_{mn} of log((f(z) - f(w)) / (z - w)) for m, n in
/// 1..M.  The quotient is assembled directly in divided-difference form
///   F(z, w) = 1 + sum_k c_k (z^k + z^{k-1} w + ... + w^k),
/// so no Laurent division is involved, and the z-log comes from the exact
/// antiderivative of F_z / F.  Entry (m, n) needs c_{m+n}, hence the point
/// must carry at least 2M coefficients.
template <class C>
std::vector<std::vector<C>> grunsky_b_table(const UnivalentPoint<C>& x, int msize) {
    using T = scalar_traits<C>;
    using Inner = TruncatedSeries<C>;
    using Outer = TruncatedSeries<Inner>;
    int n = x.truncation();
    if (msize < 1) raise(errc::bad_input, "matrix size must be positive");
    if (2 * msize > n)
        raise(errc::truncation_insufficient,
              "Grunsky block of size M needs a point with at least 2M coefficients");

    Inner izero = Inner::zero(0, msize, T::zero_like(C{}));
    Outer f = Outer::zero(0, msize, izero);
    for (int i = 0; i <= msize; ++i) {
        Inner fi = izero;
        for (int j = 0; j <= msize; ++j) {
            int k = i + j; // coefficient of z^i w^j is c_{i+j}
            if (k == 0) continue;
            if (k <= n) fi.set(j, x.coeff(k));
        }
        if (i == 0) fi.set(0, T::one_like(C{}));
        f.set(i, fi);
    }

    Outer lg = antiderivative(derivative(f) / f);
    std::vector<std::vector<C>> b(static_cast<size_t>(msize),
                                  std::vector<C>(static_cast<size_t>(msize), T::zero_like(C{})));
    for (int m = 1; m <= msize; ++m) {
        Inner row = lg.coeff(m);
        for (int nn = 1; nn <= msize; ++nn)
            b[static_cast<size_t>(m - 1)][static_cast<size_t>(nn - 1)] =
                nn <= row.order() ? row.coeff(nn) : T::zero_like(C{});
    }
    return b;
}

/// Grunsky matrix in the normalization beta_{mn} = sqrt(m n) b_{mn}, under
/// which the skeleton condition reads beta* beta = I.
struct GrunskyMatrix {
    CMatrix beta;
    int size() const { return beta.rows(); }
};

inline GrunskyMatrix grunsky_matrix(const UnivalentPoint<CD>& x, int msize = 0) {
    if (msize == 0) msize = x.truncation() / 2;
    auto b = grunsky_b_table(x, msize);
    CMatrix beta(msize, msize);
    for (int m = 1; m <= msize; ++m)
        for (int n = 1; n <= msize; ++n)
            beta(m - 1, n - 1) = std::sqrt(static_cast<double>(m) * n) *
                                 b[static_cast<size_t>(m - 1)][static_cast<size_t>(n - 1)];
    return {beta};
}

/// Operator-norm defect of unitarity, || I - beta* beta ||.
inline double milin_defect(const GrunskyMatrix& g) {
    CMatrix h = CMatrix::identity(g.size()) - g.beta.adjoint() * g.beta;
    auto ev = hermitian_eigenvalues(h);
    double m = 0.0;
    for (double e : ev) m = std::max(m, std::abs(e));
    return m;
}
inline double milin_defect(const UnivalentPoint<CD>& x, int msize = 0) {
    return milin_defect(grunsky_matrix(x, msize));
}

enum class SiegelClass { interior, boundary, outside };

inline const char* siegel_name(SiegelClass c) {
    switch (c) {
        case SiegelClass::interior: return "interior";
        case SiegelClass::boundary: return "boundary";
        case SiegelClass::outside: return "outside";
    }
    return "?";
}

/// Classify Z against the matrix-ball condition E - Z conj(Z) > 0 by the
/// smallest eigenvalue of the (Hermitian, for symmetric Z) matrix.
inline std::pair<SiegelClass, double> siegel_check(const GrunskyMatrix& g, double eps = 1e-8) {
    if (g.beta.symmetry_defect() > 1e-8 * std::max(1.0, g.beta.max_abs()))
        raise(errc::not_symmetric, "Siegel test needs a symmetric matrix");
    CMatrix h = CMatrix::identity(g.size()) - g.beta * g.beta.conjugated();
    auto ev = hermitian_eigenvalues(h);
    double mev = ev.front();
    SiegelClass cls = mev > eps ? SiegelClass::interior
                                : (mev < -eps ? SiegelClass::outside : SiegelClass::boundary);
    return {cls, mev};
}

// --------------------------------------------------------------------------
// residue pairings and the graph subspace
// --------------------------------------------------------------------------

/// Symplectic and pseudo-Hermitian pairings of Laurent data, from
/// coefficients, with the contour constant normalized to 1:
///   (f, g)  = sum_m m f_{-m} g_m
///   <f, g>  = sum_m m f_m conj(g_m)
template <class C>
std::pair<C, C> pairings(const TruncatedSeries<C>& f, const TruncatedSeries<C>& g) {
    using T = scalar_traits<C>;
    C symp = T::zero_like(C{});
    C herm = T::zero_like(C{});
    for (int m = g.low(); m <= g.order(); ++m) {
        C w = T::from_ratio(C{}, m, 1);
        if (-m >= f.low() && -m <= f.order()) symp += w * f.coeff(-m) * g.coeff(m);
        if (m >= f.low() && m <= f.order()) herm += w * f.coeff(m) * T::conj(g.coeff(m));
    }
    return {symp, herm};
}

/// Norm of the ambient space: sum over n != 0 of |u_n|^2 / |n|.
inline double hnorm(const TruncatedSeries<CD>& u) {
    double acc = 0.0;
    for (int k = u.low(); k <= u.order(); ++k) {
        if (k == 0) continue;
        acc += std::norm(u.coeff(k)) / std::abs(k);
    }
    return acc;
}

/// Graph of the Grunsky matrix over the weighted basis z^{-n}/sqrt(n),
/// z^m/sqrt(m): column n is z^{-n}/sqrt(n) + sum_m beta_{mn} z^m/sqrt(m).
struct KricheverSubspace {
    CMatrix beta; // just the graph data; the negative block is the identity

    int size() const { return beta.rows(); }

    TruncatedSeries<CD> column_series(int j) const {
        int m = size();
        TruncatedSeries<CD> col = TruncatedSeries<CD>::zero(-m, m);
        col.set(-(j + 1), CD(1.0 / std::sqrt(static_cast<double>(j + 1)), 0.0));
        for (int r = 1; r <= m; ++r)
            col.set(r, beta(r - 1, j) / std::sqrt(static_cast<double>(r)));
        return col;
    }
};

inline KricheverSubspace krichever_point(const UnivalentPoint<CD>& x, int msize = 0) {
    return {grunsky_matrix(x, msize).beta};
}

} // namespace virgeo

#endif
