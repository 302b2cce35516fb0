#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "ghostflow/errors.hpp"
#include "ghostflow/vec.hpp"

namespace ghostflow {

// Scalar field on a periodic macroscopic grid with multilinear
// interpolation.  Chemical potential and velocity profiles are supplied in
// this form; particle code evaluates them at x = eps * xi.
struct FieldMap {
    int dim = 2;
    double side = 1.0; // macroscopic torus side
    int n = 1;         // grid points per axis
    std::vector<double> values;

    static FieldMap constant(int dim, double side, double v) {
        FieldMap f;
        f.dim = dim;
        f.side = side;
        f.n = 1;
        f.values.assign(1, v);
        return f;
    }

    static FieldMap from_function(int dim, double side, int n,
                                  const std::function<double(const Vec&)>& fn) {
        FieldMap f;
        f.dim = dim;
        f.side = side;
        f.n = n;
        const int nz = (dim == 3) ? n : 1;
        f.values.resize(static_cast<std::size_t>(n) * n * nz);
        const double h = side / n;
        for (int z = 0; z < nz; ++z)
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x) {
                    Vec p;
                    p[0] = x * h;
                    p[1] = y * h;
                    if (dim == 3) p[2] = z * h;
                    f.values[(static_cast<std::size_t>(z) * n + y) * n + x] = fn(p);
                }
        return f;
    }

    bool is_constant() const { return n == 1; }

    double at_node(int x, int y, int z) const {
        return values[(static_cast<std::size_t>(z) * n + y) * n + x];
    }

    // periodic multilinear interpolation at macroscopic position
    double operator()(const Vec& x) const {
        if (is_constant()) return values[0];
        const double h = side / n;
        int i0[3] = {0, 0, 0}, i1[3] = {0, 0, 0};
        double w[3] = {0.0, 0.0, 0.0};
        for (int k = 0; k < dim; ++k) {
            double u = x[k] / h;
            double f = std::floor(u);
            w[k] = u - f;
            int i = static_cast<int>(f) % n;
            if (i < 0) i += n;
            i0[k] = i;
            i1[k] = (i + 1) % n;
        }
        if (dim == 2) {
            const double v00 = at_node(i0[0], i0[1], 0), v10 = at_node(i1[0], i0[1], 0);
            const double v01 = at_node(i0[0], i1[1], 0), v11 = at_node(i1[0], i1[1], 0);
            return (1 - w[0]) * (1 - w[1]) * v00 + w[0] * (1 - w[1]) * v10 +
                   (1 - w[0]) * w[1] * v01 + w[0] * w[1] * v11;
        }
        double out = 0.0;
        for (int cz = 0; cz <= 1; ++cz)
            for (int cy = 0; cy <= 1; ++cy)
                for (int cx = 0; cx <= 1; ++cx) {
                    const double wx = cx ? w[0] : 1 - w[0];
                    const double wy = cy ? w[1] : 1 - w[1];
                    const double wz = cz ? w[2] : 1 - w[2];
                    out += wx * wy * wz *
                           at_node(cx ? i1[0] : i0[0], cy ? i1[1] : i0[1], cz ? i1[2] : i0[2]);
                }
        return out;
    }
};

} // namespace ghostflow
