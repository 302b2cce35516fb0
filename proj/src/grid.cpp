#include "ghostflow/grid.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "ghostflow/currents.hpp"
#include "ghostflow/errors.hpp"

namespace ghostflow::fields {

std::size_t GridSpec::cell_of_micro(const Vec& xi) const {
    std::size_t idx = 0;
    for (int k = dim - 1; k >= 0; --k) {
        double u = xi[k] / micro_side * n;
        int c = static_cast<int>(std::floor(u));
        c %= n;
        if (c < 0) c += n;
        idx = idx * static_cast<std::size_t>(n) + static_cast<std::size_t>(c);
    }
    return idx;
}

Vec GridSpec::cell_center_macro(std::size_t c) const {
    Vec x;
    const double h = macro_side() / n;
    for (int k = 0; k < dim; ++k) {
        x[k] = (static_cast<double>(c % static_cast<std::size_t>(n)) + 0.5) * h;
        c /= static_cast<std::size_t>(n);
    }
    return x;
}

FieldGrid bin_fields(const md::ParticleState& s, const GridSpec& spec,
                     const md::PotentialSpec& pot, const md::TorusDomain& dom) {
    const int d = spec.dim;
    FieldGrid g;
    g.spec = spec;
    g.z.assign(static_cast<std::size_t>(d) + 2, std::vector<double>(spec.n_cells(), 0.0));

    const PerParticleCurrents pc = accumulate_pair_currents(s, pot, dom);
    const double scale = spec.eps_pow_d() / spec.cell_volume_macro();
    for (std::size_t i = 0; i < s.size(); ++i) {
        const std::size_t c = spec.cell_of_micro(s.pos[i]);
        g.z[0][c] += scale;
        for (int k = 0; k < d; ++k) g.z[static_cast<std::size_t>(1 + k)][c] += scale * s.vel[i][k];
        g.z[static_cast<std::size_t>(d + 1)][c] +=
            scale * (0.5 * norm2(s.vel[i], d) + 0.5 * pc.pair_pot[i]);
    }
    return g;
}

CurrentGrid compute_currents(const md::ParticleState& s, const GridSpec& spec,
                             const md::PotentialSpec& pot, const md::TorusDomain& dom) {
    const int d = spec.dim;
    const std::size_t nc = spec.n_cells();
    CurrentGrid g;
    g.spec = spec;
    g.w0.assign(static_cast<std::size_t>(d), std::vector<double>(nc, 0.0));
    g.wstar.assign(static_cast<std::size_t>(d * d), std::vector<double>(nc, 0.0));
    g.w_energy.assign(static_cast<std::size_t>(d), std::vector<double>(nc, 0.0));
    g.phi0.assign(static_cast<std::size_t>(d * d * d), std::vector<double>(nc, 0.0));
    g.phi.assign(static_cast<std::size_t>(d * d * d * d), std::vector<double>(nc, 0.0));

    const PerParticleCurrents pc = accumulate_pair_currents(s, pot, dom);
    const double scale = spec.eps_pow_d() / spec.cell_volume_macro();

    // third and fourth order displacement tensors need their own pair pass
    std::vector<double> phi0_i(s.size() * 27, 0.0);
    std::vector<double> phi_i(s.size() * 81, 0.0);
    if (!pot.is_zero() && s.size() >= 2) {
        md::for_each_pair(
            s, pot, dom, md::ForceMode::cell_list,
            [&](int ii, int jj, const Vec& dx, double r2) {
                const auto i = static_cast<std::size_t>(ii);
                const auto j = static_cast<std::size_t>(jj);
                const double dvr = pot.derivative_over_r(std::sqrt(r2));
                for (int b = 0; b < d; ++b)
                    for (int gg = 0; gg < d; ++gg)
                        for (int nu = 0; nu < d; ++nu) {
                            // Phi0^{b g nu}(xi) = -V'(r)/r xi^b xi^g xi^nu,
                            // odd under exchange
                            const double v = -dvr * dx[b] * dx[gg] * dx[nu];
                            const std::size_t off =
                                (static_cast<std::size_t>(b) * static_cast<std::size_t>(d) +
                                 static_cast<std::size_t>(gg)) *
                                    static_cast<std::size_t>(d) +
                                static_cast<std::size_t>(nu);
                            phi0_i[i * 27 + off] += v;
                            phi0_i[j * 27 + off] -= v;
                            for (int a = 0; a < d; ++a) {
                                const double w = -dvr * dx[a] * dx[b] * dx[gg] * dx[nu];
                                const std::size_t off4 =
                                    ((static_cast<std::size_t>(a) * static_cast<std::size_t>(d) +
                                      static_cast<std::size_t>(b)) *
                                         static_cast<std::size_t>(d) +
                                     static_cast<std::size_t>(gg)) *
                                        static_cast<std::size_t>(d) +
                                    static_cast<std::size_t>(nu);
                                phi_i[i * 81 + off4] += w;
                                phi_i[j * 81 + off4] += w; // even under exchange
                            }
                        }
            });
    }

    for (std::size_t i = 0; i < s.size(); ++i) {
        const std::size_t c = spec.cell_of_micro(s.pos[i]);
        const double zi_e = 0.5 * norm2(s.vel[i], d) + 0.5 * pc.pair_pot[i];
        for (int k = 0; k < d; ++k) {
            g.w0[static_cast<std::size_t>(k)][c] += scale * s.vel[i][k];
            g.w_energy[static_cast<std::size_t>(k)][c] +=
                scale * (s.vel[i][k] * zi_e + pc.esym[i * 3 + static_cast<std::size_t>(k)]);
            for (int b = 0; b < d; ++b) {
                const double psi_bk =
                    pc.psi[(i * 3 + static_cast<std::size_t>(b)) * 3 + static_cast<std::size_t>(k)];
                g.wstar[static_cast<std::size_t>(b * d + k)][c] +=
                    scale * (s.vel[i][b] * s.vel[i][k] + 0.5 * psi_bk);
            }
        }
        for (int off = 0; off < d * d * d; ++off)
            g.phi0[static_cast<std::size_t>(off)][c] +=
                0.5 * scale * phi0_i[i * 27 + static_cast<std::size_t>(off)];
        for (int off = 0; off < d * d * d * d; ++off)
            g.phi[static_cast<std::size_t>(off)][c] +=
                0.5 * scale * phi_i[i * 81 + static_cast<std::size_t>(off)];
    }
    return g;
}

namespace {

void write_binary_arrays(const std::string& path, const GridSpec& spec,
                         const std::vector<const std::vector<double>*>& arrays) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open for writing: " + path);
    const char magic[4] = {'G', 'F', 'G', 'B'};
    out.write(magic, 4);
    const std::uint32_t ver = 1;
    const auto dim = static_cast<std::uint32_t>(spec.dim);
    const auto n = static_cast<std::uint32_t>(spec.n);
    const auto na = static_cast<std::uint32_t>(arrays.size());
    out.write(reinterpret_cast<const char*>(&ver), 4);
    out.write(reinterpret_cast<const char*>(&dim), 4);
    out.write(reinterpret_cast<const char*>(&n), 4);
    out.write(reinterpret_cast<const char*>(&na), 4);
    const double eps = spec.eps, side = spec.micro_side;
    out.write(reinterpret_cast<const char*>(&eps), 8);
    out.write(reinterpret_cast<const char*>(&side), 8);
    for (const auto* a : arrays)
        out.write(reinterpret_cast<const char*>(a->data()),
                  static_cast<std::streamsize>(a->size() * sizeof(double)));
}

std::vector<int> cell_indices(const GridSpec& spec, std::size_t c) {
    std::vector<int> idx(static_cast<std::size_t>(spec.dim));
    for (int k = 0; k < spec.dim; ++k) {
        idx[static_cast<std::size_t>(k)] = static_cast<int>(c % static_cast<std::size_t>(spec.n));
        c /= static_cast<std::size_t>(spec.n);
    }
    return idx;
}

} // namespace

void FieldGrid::write_ndjson(std::ostream& out) const {
    for (std::size_t c = 0; c < spec.n_cells(); ++c) {
        nlohmann::json rec;
        rec["cell"] = cell_indices(spec, c);
        rec["z0"] = z[0][c];
        std::vector<double> mom;
        for (int k = 0; k < spec.dim; ++k) mom.push_back(z[static_cast<std::size_t>(1 + k)][c]);
        rec["momentum"] = mom;
        rec["energy"] = z[static_cast<std::size_t>(spec.dim + 1)][c];
        out << rec.dump() << "\n";
    }
}

void FieldGrid::write_binary(const std::string& path) const {
    std::vector<const std::vector<double>*> arrays;
    for (const auto& a : z) arrays.push_back(&a);
    write_binary_arrays(path, spec, arrays);
}

void CurrentGrid::write_ndjson(std::ostream& out) const {
    for (std::size_t c = 0; c < spec.n_cells(); ++c) {
        nlohmann::json rec;
        rec["cell"] = cell_indices(spec, c);
        std::vector<double> v;
        for (const auto& a : w0) v.push_back(a[c]);
        rec["w0"] = v;
        v.clear();
        for (const auto& a : wstar) v.push_back(a[c]);
        rec["wstar"] = v;
        v.clear();
        for (const auto& a : w_energy) v.push_back(a[c]);
        rec["w_energy"] = v;
        out << rec.dump() << "\n";
    }
}

void CurrentGrid::write_binary(const std::string& path) const {
    std::vector<const std::vector<double>*> arrays;
    for (const auto& a : w0) arrays.push_back(&a);
    for (const auto& a : wstar) arrays.push_back(&a);
    for (const auto& a : w_energy) arrays.push_back(&a);
    for (const auto& a : phi0) arrays.push_back(&a);
    for (const auto& a : phi) arrays.push_back(&a);
    write_binary_arrays(path, spec, arrays);
}

} // namespace ghostflow::fields
