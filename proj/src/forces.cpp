#include "ghostflow/forces.hpp"

#include <cmath>
#include <thread>

namespace ghostflow::md {

CellList CellList::build(const ParticleState& s, double cutoff, const TorusDomain& dom) {
    CellList cl;
    cl.dim = dom.dim;
    cl.side = dom.side;
    const double edge_min = std::max(cutoff, 1e-12);
    int m = static_cast<int>(std::floor(dom.side / edge_min));
    if (m < 1) m = 1;
    cl.cells_per_side = m;
    const int mz = (dom.dim == 3) ? m : 1;
    cl.members.assign(static_cast<std::size_t>(m) * m * mz, {});
    for (int i = 0; i < static_cast<int>(s.size()); ++i)
        cl.members[static_cast<std::size_t>(cl.cell_index_of(s.pos[static_cast<std::size_t>(i)]))]
            .push_back(i);
    return cl;
}

int CellList::cell_index_of(const Vec& p) const {
    const int m = cells_per_side;
    int idx[3] = {0, 0, 0};
    for (int k = 0; k < dim; ++k) {
        int c = static_cast<int>(std::floor(p[k] / side * m));
        if (c >= m) c = m - 1;
        if (c < 0) c = 0;
        idx[k] = c;
    }
    return (idx[2] * m + idx[1]) * m + idx[0];
}

ForceResult compute_forces(const ParticleState& s, const PotentialSpec& pot,
                           const TorusDomain& dom, ForceMode mode, int threads) {
    ForceResult r;
    r.force.assign(s.size(), Vec{});
    if (pot.is_zero() || s.size() < 2) return r;

    if (threads <= 1) {
        for_each_pair(s, pot, dom, mode, [&](int i, int j, const Vec& d, double r2) {
            const double dist = std::sqrt(r2);
            const double fr = -pot.derivative_over_r(dist); // force magnitude / r
            for (int k = 0; k < dom.dim; ++k) {
                const double f = fr * d[k];
                r.force[static_cast<std::size_t>(i)][k] += f;
                r.force[static_cast<std::size_t>(j)][k] -= f;
            }
            r.potential_energy += pot.value(dist);
        });
        return r;
    }

    // Data-parallel over a fixed pair partition; per-worker accumulators are
    // merged in worker order, so results depend on the worker count only
    // through floating-point reduction order.
    struct Partial {
        std::vector<Vec> force;
        double energy = 0.0;
    };
    std::vector<std::pair<int, int>> pairs;
    std::vector<Vec> disp;
    std::vector<double> r2s;
    for_each_pair(s, pot, dom, mode, [&](int i, int j, const Vec& d, double r2) {
        pairs.emplace_back(i, j);
        disp.push_back(d);
        r2s.push_back(r2);
    });
    const std::size_t np = pairs.size();
    const std::size_t nw = static_cast<std::size_t>(threads);
    std::vector<Partial> part(nw);
    std::vector<std::thread> workers;
    for (std::size_t w = 0; w < nw; ++w) {
        part[w].force.assign(s.size(), Vec{});
        workers.emplace_back([&, w]() {
            const std::size_t lo = np * w / nw, hi = np * (w + 1) / nw;
            for (std::size_t p = lo; p < hi; ++p) {
                const double dist = std::sqrt(r2s[p]);
                const double fr = -pot.derivative_over_r(dist);
                const auto [i, j] = pairs[p];
                for (int k = 0; k < dom.dim; ++k) {
                    const double f = fr * disp[p][k];
                    part[w].force[static_cast<std::size_t>(i)][k] += f;
                    part[w].force[static_cast<std::size_t>(j)][k] -= f;
                }
                part[w].energy += pot.value(dist);
            }
        });
    }
    for (auto& t : workers) t.join();
    for (std::size_t w = 0; w < nw; ++w) {
        for (std::size_t i = 0; i < s.size(); ++i) r.force[i] += part[w].force[i];
        r.potential_energy += part[w].energy;
    }
    return r;
}

Invariants total_invariants(const ParticleState& s, const PotentialSpec& pot,
                            const TorusDomain& dom) {
    Invariants inv;
    inv.n = s.size();
    for (const auto& v : s.vel) {
        inv.momentum += v;
        inv.kinetic += 0.5 * norm2(v, s.dim);
    }
    if (!pot.is_zero() && s.size() >= 2) {
        for_each_pair(s, pot, dom, ForceMode::cell_list,
                      [&](int, int, const Vec&, double r2) {
                          inv.potential += pot.value(std::sqrt(r2));
                      });
    }
    inv.energy = inv.kinetic + inv.potential;
    return inv;
}

} // namespace ghostflow::md
