#pragma once

#include <cmath>

#include "ghostflow/errors.hpp"
#include "ghostflow/forces.hpp"

namespace ghostflow::md {

namespace detail {

inline int wrap_cell(int c, int m) { return (c % m + m) % m; }

// Half stencil of neighbor cell offsets so each cell pair is visited once.
inline std::vector<std::array<int, 3>> half_stencil(int dim) {
    std::vector<std::array<int, 3>> out;
    const int zlo = (dim == 3) ? -1 : 0;
    for (int dz = zlo; dz <= (dim == 3 ? 1 : 0); ++dz)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                // keep strictly "positive" offsets plus the self cell
                if (dz > 0 || (dz == 0 && (dy > 0 || (dy == 0 && dx >= 0))))
                    out.push_back({dx, dy, dz});
            }
    return out;
}

} // namespace detail

template <typename F>
void for_each_pair(const ParticleState& s, const PotentialSpec& pot,
                   const TorusDomain& dom, ForceMode mode, F&& fn) {
    const double rc = pot.range;
    const double rc2 = rc * rc;
    const int n = static_cast<int>(s.size());

    CellList cl;
    if (mode == ForceMode::cell_list) cl = CellList::build(s, rc, dom);
    const bool use_cells = (mode == ForceMode::cell_list) && cl.cells_per_side >= 3;

    auto visit = [&](int i, int j) {
        const Vec d = minimum_image(s.pos[static_cast<std::size_t>(i)],
                                    s.pos[static_cast<std::size_t>(j)], dom);
        const double r2 = norm2(d, dom.dim);
        if (r2 >= rc2) return;
        if (r2 == 0.0)
            throw degenerate_configuration_error(
                "overlapping particles at indices " + std::to_string(i) + "," + std::to_string(j));
        fn(i, j, d, r2);
    };

    if (!use_cells) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) visit(i, j);
        return;
    }

    const int m = cl.cells_per_side;
    const auto stencil = detail::half_stencil(dom.dim);
    const int mz = (dom.dim == 3) ? m : 1;
    for (int cz = 0; cz < mz; ++cz)
        for (int cy = 0; cy < m; ++cy)
            for (int cx = 0; cx < m; ++cx) {
                const int c = (cz * m + cy) * m + cx;
                const auto& mem = cl.members[static_cast<std::size_t>(c)];
                for (const auto& off : stencil) {
                    const bool self = (off[0] == 0 && off[1] == 0 && off[2] == 0);
                    const int nx = detail::wrap_cell(cx + off[0], m);
                    const int ny = detail::wrap_cell(cy + off[1], m);
                    const int nz = (dom.dim == 3) ? detail::wrap_cell(cz + off[2], m) : 0;
                    const int c2 = (nz * m + ny) * m + nx;
                    const auto& mem2 = cl.members[static_cast<std::size_t>(c2)];
                    if (self) {
                        for (std::size_t a = 0; a < mem.size(); ++a)
                            for (std::size_t b = a + 1; b < mem.size(); ++b)
                                visit(mem[a], mem[b]);
                    } else if (c2 != c) {
                        for (int i : mem)
                            for (int j : mem2) visit(i, j);
                    }
                }
            }
}

} // namespace ghostflow::md
