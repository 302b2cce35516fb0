#pragma once

#include <cmath>
#include <cstdint>

namespace ghostflow {

// xoshiro256++ with splitmix64 seeding.  All transforms (uniform, normal)
// are written out explicitly so that runs are bit-reproducible across
// platforms and standard-library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
        for (auto& w : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            w = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [a,b)
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // uniform integer in [0,n)
    std::uint64_t uniform_index(std::uint64_t n) {
        // multiply-shift; bias is negligible for n << 2^64 and has no effect
        // on reproducibility, which is what we care about here
        return static_cast<std::uint64_t>((static_cast<__uint128_t>(next_u64()) * n) >> 64);
    }

    // standard normal via polar Box-Muller (cached second variate)
    double normal() {
        if (have_cache_) {
            have_cache_ = false;
            return cache_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        cache_ = v * f;
        have_cache_ = true;
        return u * f;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
    double cache_ = 0.0;
    bool have_cache_ = false;
};

} // namespace ghostflow
