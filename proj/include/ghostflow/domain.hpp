#pragma once

#include <cmath>

#include "ghostflow/errors.hpp"
#include "ghostflow/vec.hpp"

namespace ghostflow::md {

// Periodic box in microscopic units.  The macroscopic side is eps * side;
// the scale parameter enters only at the field/current layer.
struct TorusDomain {
    int dim = 2;          // 2 or 3
    double side = 10.0;   // L, microscopic units
    double cell_cutoff = 1.0; // lower bound on the cell edge used by cell lists

    void validate() const {
        if (dim != 2 && dim != 3) throw config_error("TorusDomain: dim must be 2 or 3");
        if (!(side > 2.0 * cell_cutoff))
            throw config_error("TorusDomain: need side > 2*cell_cutoff");
    }

    double volume() const {
        double v = 1.0;
        for (int k = 0; k < dim; ++k) v *= side;
        return v;
    }

    double wrap(double x) const {
        double y = x - side * std::floor(x / side);
        if (y >= side) y -= side; // guard against floor rounding at the edge
        return y;
    }

    Vec wrap(Vec p) const {
        for (int k = 0; k < dim; ++k) p[k] = wrap(p[k]);
        return p;
    }
};

// Shortest periodic displacement from q to p, each component in [-L/2, L/2).
inline Vec minimum_image(const Vec& p, const Vec& q, const TorusDomain& dom) {
    Vec d;
    for (int k = 0; k < dom.dim; ++k) {
        const double raw = p[k] - q[k];
        d[k] = raw - dom.side * std::floor(raw / dom.side + 0.5);
    }
    return d;
}

} // namespace ghostflow::md
