#pragma once

#include <cmath>
#include <string>

#include "ghostflow/errors.hpp"

namespace ghostflow::md {

// Finite-range central pair potential.  The default form
//   V(r) = a * (1 - (r/rc)^2)^4   for r < rc, 0 otherwise
// is C^3 at the cutoff, so forces and their first two derivatives vanish
// smoothly at rc.
struct PotentialSpec {
    enum class Kind { poly4, zero };
    Kind kind = Kind::poly4;
    double amplitude = 1.0; // a, energy units
    double range = 1.0;     // rc, length units

    static PotentialSpec parse(const std::string& name, double a, double rc) {
        PotentialSpec p;
        if (name == "poly4") p.kind = Kind::poly4;
        else if (name == "zero" || name == "none") p.kind = Kind::zero;
        else throw config_error("unknown potential kind: " + name);
        p.amplitude = a;
        p.range = rc;
        return p;
    }

    bool is_zero() const { return kind == Kind::zero || amplitude == 0.0; }

    double value(double r) const {
        if (is_zero() || r >= range) return 0.0;
        const double s = r / range;
        const double u = 1.0 - s * s;
        const double u2 = u * u;
        return amplitude * u2 * u2;
    }

    // dV/dr
    double derivative(double r) const {
        if (is_zero() || r >= range) return 0.0;
        const double s = r / range;
        const double u = 1.0 - s * s;
        return -8.0 * amplitude * (r / (range * range)) * u * u * u;
    }

    // V'(r)/r, finite as r -> 0
    double derivative_over_r(double r) const {
        if (is_zero() || r >= range) return 0.0;
        const double u = 1.0 - (r / range) * (r / range);
        return -8.0 * amplitude / (range * range) * u * u * u;
    }
};

} // namespace ghostflow::md
