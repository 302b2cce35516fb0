#pragma once

#include <array>
#include <cmath>

namespace ghostflow {

// Small d-vector (d = 2 or 3). Unused components stay zero so 2-D and 3-D
// code can share storage and loops.
struct Vec {
    std::array<double, 3> c{0.0, 0.0, 0.0};

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    Vec& operator+=(const Vec& o) {
        for (int k = 0; k < 3; ++k) c[k] += o.c[k];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int k = 0; k < 3; ++k) c[k] -= o.c[k];
        return *this;
    }
    Vec& operator*=(double s) {
        for (int k = 0; k < 3; ++k) c[k] *= s;
        return *this;
    }
};

inline Vec operator+(Vec a, const Vec& b) { return a += b; }
inline Vec operator-(Vec a, const Vec& b) { return a -= b; }
inline Vec operator*(double s, Vec a) { return a *= s; }
inline Vec operator*(Vec a, double s) { return a *= s; }

inline double dot(const Vec& a, const Vec& b, int dim) {
    double s = 0.0;
    for (int k = 0; k < dim; ++k) s += a[k] * b[k];
    return s;
}

inline double norm2(const Vec& a, int dim) { return dot(a, a, dim); }
inline double norm(const Vec& a, int dim) { return std::sqrt(norm2(a, dim)); }

} // namespace ghostflow
