#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ghostflow/forces.hpp"
#include "ghostflow/particle_state.hpp"

namespace ghostflow::fields {

// Binning grid on the macroscopic torus of side eps * micro_side.  Cell
// indicators realize the delta functions, so per-cell sums reproduce totals
// exactly.
struct GridSpec {
    int dim = 2;
    int n = 8;            // cells per axis
    double eps = 0.1;     // scale parameter
    double micro_side = 10.0;

    double macro_side() const { return eps * micro_side; }
    std::size_t n_cells() const {
        std::size_t c = 1;
        for (int k = 0; k < dim; ++k) c *= static_cast<std::size_t>(n);
        return c;
    }
    double cell_volume_macro() const {
        double v = 1.0;
        for (int k = 0; k < dim; ++k) v *= macro_side() / n;
        return v;
    }
    // eps^d
    double eps_pow_d() const {
        double v = 1.0;
        for (int k = 0; k < dim; ++k) v *= eps;
        return v;
    }
    std::size_t cell_of_micro(const Vec& xi) const;
    Vec cell_center_macro(std::size_t c) const;
};

// Empirical conserved fields z^mu, mu = 0..d+1, one array per mu.
struct FieldGrid {
    GridSpec spec;
    std::vector<std::vector<double>> z; // [mu][cell]

    void write_ndjson(std::ostream& out) const;
    void write_binary(const std::string& path) const;
};

// Microscopic currents on the same grid: w^{0k}, w_*^{bk}, w^{d+1,k}, plus
// the interaction tensors entering at order eps and eps^2.
struct CurrentGrid {
    GridSpec spec;
    std::vector<std::vector<double>> w0;            // [k][cell]
    std::vector<std::vector<double>> wstar;         // [b*d+k][cell]
    std::vector<std::vector<double>> w_energy;      // [k][cell]
    std::vector<std::vector<double>> phi0;          // [(b*d+g)*d+nu][cell]
    std::vector<std::vector<double>> phi;           // [((a*d+b)*d+g)*d+nu][cell]

    void write_ndjson(std::ostream& out) const;
    void write_binary(const std::string& path) const;
};

FieldGrid bin_fields(const md::ParticleState& s, const GridSpec& spec,
                     const md::PotentialSpec& pot, const md::TorusDomain& dom);

CurrentGrid compute_currents(const md::ParticleState& s, const GridSpec& spec,
                             const md::PotentialSpec& pot, const md::TorusDomain& dom);

} // namespace ghostflow::fields
