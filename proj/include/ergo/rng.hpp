#pragma once

#include <cstdint>
#include <cmath>

namespace ergo {

// SplitMix64 finalizer. Fixed constants so that seed derivation is identical
// on every platform and in every build.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Order-sensitive combine, boost-style. Used to derive child seeds:
//   child = hash_combine(hash_combine(global_seed, x0_index), traj_index)
inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    h ^= mix64(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return mix64(h);
}

inline std::uint64_t child_seed(std::uint64_t global_seed,
                                std::uint64_t x0_index,
                                std::uint64_t traj_index) {
    return hash_combine(hash_combine(global_seed, x0_index), traj_index);
}

// Self-contained PRNG: SplitMix64 stream + Box-Muller normals.
// No std::random engines anywhere so streams are bit-reproducible everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform on (0,1]: 53-bit mantissa, never exactly zero (log-safe).
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace ergo
