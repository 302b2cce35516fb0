#pragma once

#include <vector>

#include "ghostflow/domain.hpp"
#include "ghostflow/particle_state.hpp"
#include "ghostflow/potential.hpp"

namespace ghostflow::md {

struct ForceResult {
    std::vector<Vec> force;
    double potential_energy = 0.0;
};

enum class ForceMode {
    cell_list, // default; falls back to all_pairs when the box is too small
    all_pairs  // O(N^2) reference path, used as the oracle in tests
};

// Pairwise forces and total pair energy.  Newton's third law is applied
// exactly (each pair computed once, accumulated to both members), so the
// net force is zero up to floating rounding.  Iteration order is fixed, so
// results are bit-reproducible for a given mode and thread count.
ForceResult compute_forces(const ParticleState& s, const PotentialSpec& pot,
                           const TorusDomain& dom,
                           ForceMode mode = ForceMode::cell_list,
                           int threads = 1);

// Fixed-geometry cell decomposition used by the force loop and by the
// current accumulators.  Cells have edge >= cutoff; neighbor enumeration
// covers each pair exactly once.
struct CellList {
    int dim = 2;
    int cells_per_side = 0; // 0 => degenerate, use all-pairs
    double side = 0.0;
    std::vector<std::vector<int>> members;

    static CellList build(const ParticleState& s, double cutoff, const TorusDomain& dom);
    int cell_index_of(const Vec& p) const;
};

// Visit every unordered pair within the cutoff exactly once, in a fixed
// deterministic order.  fn(i, j, disp, r2) receives the minimum-image
// displacement xi_i - xi_j.
template <typename F>
void for_each_pair(const ParticleState& s, const PotentialSpec& pot,
                   const TorusDomain& dom, ForceMode mode, F&& fn);

Invariants total_invariants(const ParticleState& s, const PotentialSpec& pot,
                            const TorusDomain& dom);

} // namespace ghostflow::md

#include "ghostflow/detail/pair_loop.hpp"
