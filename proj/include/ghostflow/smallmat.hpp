#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "ghostflow/errors.hpp"

namespace ghostflow {

// Dense row-major matrix, only used for small systems (Gram matrices,
// isotropy fits), so no attempt at performance.
struct SmallMat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    SmallMat() = default;
    SmallMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

// Gauss-Jordan with partial pivoting; throws on (near-)singular input.
inline SmallMat invert(const SmallMat& m) {
    if (m.rows != m.cols) throw numerical_error("invert: non-square matrix");
    const std::size_t n = m.rows;
    SmallMat aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
        aug(i, n + i) = 1.0;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(aug(r, col)) > std::fabs(aug(piv, col))) piv = r;
        if (std::fabs(aug(piv, col)) < 1e-300)
            throw numerical_error("invert: singular matrix");
        if (piv != col)
            for (std::size_t j = 0; j < 2 * n; ++j) std::swap(aug(piv, j), aug(col, j));
        const double d = aug(col, col);
        for (std::size_t j = 0; j < 2 * n; ++j) aug(col, j) /= d;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = aug(r, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < 2 * n; ++j) aug(r, j) -= f * aug(col, j);
        }
    }
    SmallMat inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
    return inv;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi; used for condition
// number reporting only.
inline std::vector<double> symmetric_eigenvalues(SmallMat m) {
    const std::size_t n = m.rows;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += m(i, j) * m(i, j);
        if (off < 1e-28) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(m(p, q)) < 1e-300) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * m(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = m(i, i);
    return ev;
}

// Least squares solve of (A^T A) x = A^T b for skinny A; small systems only.
inline std::vector<double> least_squares(const SmallMat& A, const std::vector<double>& b) {
    const std::size_t n = A.cols;
    SmallMat ata(n, n);
    std::vector<double> atb(n, 0.0);
    for (std::size_t i = 0; i < A.rows; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            atb[j] += A(i, j) * b[i];
            for (std::size_t k = 0; k < n; ++k) ata(j, k) += A(i, j) * A(i, k);
        }
    }
    SmallMat inv = invert(ata);
    std::vector<double> x(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) x[j] += inv(j, k) * atb[k];
    return x;
}

} // namespace ghostflow
