#pragma once

#include <cstddef>
#include <vector>

#include "ghostflow/errors.hpp"
#include "ghostflow/smallmat.hpp"

namespace ghostflow {

// Cubic spline through (x_i, y_i) with not-a-knot boundaries (third
// derivative continuous across the first and last interior knots), strictly
// increasing x.  Exact for cubics, which keeps edge derivatives clean.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n) throw numerical_error("CubicSpline: need >= 2 points");
        m_.assign(n, 0.0);
        if (n == 2) return;
        SmallMat a(n, n);
        std::vector<double> r(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1];
            const double h1 = x_[i + 1] - x_[i];
            a(i, i - 1) = h0 / 6.0;
            a(i, i) = (h0 + h1) / 3.0;
            a(i, i + 1) = h1 / 6.0;
            r[i] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
        }
        if (n == 3) {
            // single quadratic: constant second derivative
            a(0, 0) = 1.0;
            a(0, 1) = -1.0;
            a(n - 1, n - 2) = 1.0;
            a(n - 1, n - 1) = -1.0;
        } else {
            const double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
            a(0, 0) = h1;
            a(0, 1) = -(h0 + h1);
            a(0, 2) = h0;
            const double hm = x_[n - 2] - x_[n - 3], hl = x_[n - 1] - x_[n - 2];
            a(n - 1, n - 3) = hl;
            a(n - 1, n - 2) = -(hm + hl);
            a(n - 1, n - 1) = hm;
        }
        SmallMat inv = invert(a);
        for (std::size_t i = 0; i < n; ++i) {
            double v = 0.0;
            for (std::size_t j = 0; j < n; ++j) v += inv(i, j) * r[j];
            m_[i] = v;
        }
    }

    double value(double x) const { return eval(x, 0); }
    double derivative(double x) const { return eval(x, 1); }
    double second_derivative(double x) const { return eval(x, 2); }

    // exact integral of the piecewise cubic from x_0 to x_k for every node
    std::vector<double> cumulative_at_nodes() const {
        std::vector<double> cum(x_.size(), 0.0);
        for (std::size_t i = 1; i < x_.size(); ++i) {
            const double h = x_[i] - x_[i - 1];
            cum[i] = cum[i - 1] + 0.5 * h * (y_[i - 1] + y_[i]) -
                     h * h * h * (m_[i - 1] + m_[i]) / 24.0;
        }
        return cum;
    }

private:
    double eval(double x, int order) const {
        const std::size_t n = x_.size();
        std::size_t lo = 0, hi = n - 1;
        if (x <= x_[0]) hi = 1;
        else if (x >= x_[n - 1]) lo = n - 2;
        else {
            while (hi - lo > 1) {
                const std::size_t mid = (lo + hi) / 2;
                if (x_[mid] > x) hi = mid;
                else lo = mid;
            }
        }
        const double h = x_[hi] - x_[lo];
        const double A = (x_[hi] - x) / h;
        const double B = (x - x_[lo]) / h;
        if (order == 0)
            return A * y_[lo] + B * y_[hi] +
                   ((A * A * A - A) * m_[lo] + (B * B * B - B) * m_[hi]) * h * h / 6.0;
        if (order == 1)
            return (y_[hi] - y_[lo]) / h -
                   (3.0 * A * A - 1.0) / 6.0 * h * m_[lo] + (3.0 * B * B - 1.0) / 6.0 * h * m_[hi];
        return A * m_[lo] + B * m_[hi];
    }

    std::vector<double> x_, y_, m_;
};

// Tensor-product interpolation on a rectangular grid: spline rows along the
// second axis, then a spline across the results along the first axis.
class Spline2D {
public:
    Spline2D() = default;
    Spline2D(std::vector<double> x1, std::vector<double> x2, const std::vector<double>& vals)
        : x1_(std::move(x1)), x2_(std::move(x2)) {
        const std::size_t n1 = x1_.size(), n2 = x2_.size();
        if (vals.size() != n1 * n2) throw numerical_error("Spline2D: shape mismatch");
        rows_.reserve(n1);
        for (std::size_t i = 0; i < n1; ++i) {
            std::vector<double> row(vals.begin() + static_cast<std::ptrdiff_t>(i * n2),
                                    vals.begin() + static_cast<std::ptrdiff_t>((i + 1) * n2));
            rows_.emplace_back(x2_, std::move(row));
        }
    }

    // order1/order2: derivative order along each axis (0, 1 or 2 total)
    double eval(double u, double v, int order1 = 0, int order2 = 0) const {
        std::vector<double> col(rows_.size());
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            col[i] = order2 == 0   ? rows_[i].value(v)
                     : order2 == 1 ? rows_[i].derivative(v)
                                   : rows_[i].second_derivative(v);
        }
        CubicSpline s(x1_, col);
        return order1 == 0 ? s.value(u) : order1 == 1 ? s.derivative(u) : s.second_derivative(u);
    }

private:
    std::vector<double> x1_, x2_;
    std::vector<CubicSpline> rows_;
};

} // namespace ghostflow
