#ifndef VIRGEO_MATRIX_HPP
#define VIRGEO_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "virgeo/error.hpp"
#include "virgeo/scalar.hpp"

namespace virgeo {

/// Dense complex matrix, row-major.  Sized for the truncations this library
/// works at (N <= 64); no sparsity, no pivoted factorizations beyond what the
/// welding solver and spectral checks need.
class CMatrix {
public:
    CMatrix() : rows_(0), cols_(0) {}
    CMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

    static CMatrix identity(int n) {
        CMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    CD& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const CD& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    friend CMatrix operator+(const CMatrix& x, const CMatrix& y) {
        CMatrix r = x;
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += y.a_[i];
        return r;
    }
    friend CMatrix operator-(const CMatrix& x, const CMatrix& y) {
        CMatrix r = x;
        for (size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= y.a_[i];
        return r;
    }
    friend CMatrix operator*(const CMatrix& x, const CMatrix& y) {
        CMatrix r(x.rows_, y.cols_);
        for (int i = 0; i < x.rows_; ++i)
            for (int k = 0; k < x.cols_; ++k) {
                CD v = x(i, k);
                if (v == CD(0.0)) continue;
                for (int j = 0; j < y.cols_; ++j) r(i, j) += v * y(k, j);
            }
        return r;
    }

    CMatrix adjoint() const {
        CMatrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }
    CMatrix transpose() const {
        CMatrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
    CMatrix conjugated() const {
        CMatrix r = *this;
        for (auto& v : r.a_) v = std::conj(v);
        return r;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    double symmetry_defect() const {
        double m = 0.0;
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
        return m;
    }

private:
    int rows_, cols_;
    std::vector<CD> a_;
};

/// Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.
/// Returns them sorted ascending.
inline std::vector<double> hermitian_eigenvalues(CMatrix h) {
    int n = h.rows();
    if (n != h.cols()) raise(errc::bad_input, "eigenvalues of non-square matrix");
    double herm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) herm = std::max(herm, std::abs(h(i, j) - std::conj(h(j, i))));
    if (herm > 1e-10 * std::max(1.0, h.max_abs()))
        raise(errc::not_symmetric, "matrix is not Hermitian within tolerance");
    // symmetrize away roundoff
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            CD v = 0.5 * (h(i, j) + std::conj(h(j, i)));
            h(i, j) = v;
            h(j, i) = std::conj(v);
        }

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += std::norm(h(p, q));
        if (off < 1e-30 * std::max(1.0, h.max_abs() * h.max_abs())) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                CD hpq = h(p, q);
                double apq = std::abs(hpq);
                if (apq < 1e-300) continue;
                double app = h(p, p).real(), aqq = h(q, q).real();
                // rotation angle and phase that annihilate the (p,q) entry
                CD phase = hpq / apq;
                double theta = 0.5 * std::atan2(2.0 * apq, app - aqq);
                double c = std::cos(theta), s = std::sin(theta);
                CD sp = s * std::conj(phase);
                for (int k = 0; k < n; ++k) {
                    CD hpk = h(p, k), hqk = h(q, k);
                    h(p, k) = c * hpk + std::conj(sp) * hqk;
                    h(q, k) = -sp * hpk + c * hqk;
                }
                for (int k = 0; k < n; ++k) {
                    CD hkp = h(k, p), hkq = h(k, q);
                    h(k, p) = c * hkp + sp * hkq;
                    h(k, q) = -std::conj(sp) * hkp + c * hkq;
                }
            }
    }
    std::vector<double> ev(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ev[static_cast<size_t>(i)] = h(i, i).real();
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Operator (spectral) norm of a general complex matrix via the largest
/// eigenvalue of A*A.
inline double operator_norm(const CMatrix& a) {
    CMatrix g = a.adjoint() * a;
    auto ev = hermitian_eigenvalues(g);
    double top = ev.empty() ? 0.0 : std::max(0.0, ev.back());
    return std::sqrt(top);
}

/// Solve the square complex system A x = b by Gaussian elimination with
/// partial pivoting (A is copied).
inline std::vector<CD> solve_linear(CMatrix a, std::vector<CD> b) {
    int n = a.rows();
    if (n != a.cols() || static_cast<int>(b.size()) != n)
        raise(errc::bad_input, "linear solve dimension mismatch");
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) < 1e-300) raise(errc::gauge_singular, "singular linear system");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
            std::swap(b[static_cast<size_t>(piv)], b[static_cast<size_t>(col)]);
        }
        for (int r = col + 1; r < n; ++r) {
            CD f = a(r, col) / a(col, col);
            if (f == CD(0.0)) continue;
            for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
            b[static_cast<size_t>(r)] -= f * b[static_cast<size_t>(col)];
        }
    }
    std::vector<CD> x(static_cast<size_t>(n));
    for (int r = n - 1; r >= 0; --r) {
        CD acc = b[static_cast<size_t>(r)];
        for (int j = r + 1; j < n; ++j) acc -= a(r, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(r)] = acc / a(r, r);
    }
    return x;
}

/// Same for a real system.
inline std::vector<double> solve_linear_real(std::vector<std::vector<double>> a,
                                             std::vector<double> b) {
    size_t n = b.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300) raise(errc::gauge_singular, "singular linear system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (size_t r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (size_t j = r + 1; j < n; ++j) acc -= a[r][j] * x[j];
        x[r] = acc / a[r][r];
    }
    return x;
}

} // namespace virgeo

#endif
