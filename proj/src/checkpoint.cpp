#include "ghostflow/particle_state.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "ghostflow/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint io assumes a little-endian host");

namespace ghostflow::md {

namespace {

constexpr char kMagic[4] = {'G', 'H', 'F', 'L'};
constexpr std::uint32_t kVersion = 1;

void put_f64(std::ostream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(double));
}

double get_f64(std::istream& in) {
    double v = 0.0;
    in.read(reinterpret_cast<char*>(&v), sizeof(double));
    return v;
}

} // namespace

void append_checkpoint(std::ostream& out, const ParticleState& s) {
    out.write(kMagic, 4);
    const std::uint32_t ver = kVersion;
    out.write(reinterpret_cast<const char*>(&ver), sizeof(ver));
    put_f64(out, static_cast<double>(s.dim));
    put_f64(out, static_cast<double>(s.size()));
    put_f64(out, s.box);
    put_f64(out, s.time);
    for (const auto& p : s.pos)
        for (int k = 0; k < s.dim; ++k) put_f64(out, p[k]);
    for (const auto& v : s.vel)
        for (int k = 0; k < s.dim; ++k) put_f64(out, v[k]);
}

void write_checkpoint(const std::string& path, const ParticleState& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open checkpoint for writing: " + path);
    append_checkpoint(out, s);
}

namespace {

bool read_frame(std::istream& in, ParticleState& s) {
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() == 0) return false;
    if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0)
        throw config_error("bad checkpoint magic");
    std::uint32_t ver = 0;
    in.read(reinterpret_cast<char*>(&ver), sizeof(ver));
    if (ver != kVersion) throw config_error("unsupported checkpoint version");
    s.dim = static_cast<int>(get_f64(in));
    const auto n = static_cast<std::size_t>(get_f64(in));
    s.box = get_f64(in);
    s.time = get_f64(in);
    if (s.dim != 2 && s.dim != 3) throw config_error("checkpoint: bad dimension");
    s.pos.assign(n, Vec{});
    s.vel.assign(n, Vec{});
    for (auto& p : s.pos)
        for (int k = 0; k < s.dim; ++k) p[k] = get_f64(in);
    for (auto& v : s.vel)
        for (int k = 0; k < s.dim; ++k) v[k] = get_f64(in);
    if (!in) throw config_error("truncated checkpoint");
    return true;
}

} // namespace

ParticleState read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open checkpoint: " + path);
    ParticleState s;
    if (!read_frame(in, s)) throw config_error("empty checkpoint: " + path);
    return s;
}

std::vector<ParticleState> read_trajectory(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open trajectory: " + path);
    std::vector<ParticleState> frames;
    ParticleState s;
    while (read_frame(in, s)) frames.push_back(s);
    return frames;
}

} // namespace ghostflow::md
