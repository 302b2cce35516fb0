#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ghostflow/domain.hpp"
#include "ghostflow/vec.hpp"

namespace ghostflow::md {

// Microscopic configuration (xi_i, v_i).  Positions are kept wrapped into
// [0, L)^d.
struct ParticleState {
    int dim = 2;
    double box = 10.0; // L
    double time = 0.0;
    std::vector<Vec> pos;
    std::vector<Vec> vel;

    std::size_t size() const { return pos.size(); }
};

struct Invariants {
    std::size_t n = 0;
    Vec momentum;
    double kinetic = 0.0;
    double potential = 0.0;
    double energy = 0.0;
};

// Trajectory checkpoint file:
//   magic "GHFL", version u32, then d, N, L, time as little-endian f64,
//   then N records of d f64 positions, then N records of d f64 velocities.
void write_checkpoint(const std::string& path, const ParticleState& s);
ParticleState read_checkpoint(const std::string& path);

// A trajectory file is a plain concatenation of checkpoint records.
void append_checkpoint(std::ostream& out, const ParticleState& s);
std::vector<ParticleState> read_trajectory(const std::string& path);

} // namespace ghostflow::md
