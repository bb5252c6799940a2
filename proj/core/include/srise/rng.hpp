#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace srise {

/// Deterministic random source.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard)
/// and maps its raw output to uniform/normal variates with hand-rolled,
/// platform-independent transforms. std::uniform_*_distribution is
/// deliberately avoided: its output is implementation-defined and would
/// break the byte-reproducibility contract of seeded runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform integer in [0, n). Requires n > 0. Unbiased (rejection sampling).
    std::uint64_t uniform_below(std::uint64_t n) {
        // Lemire's multiply-shift with rejection.
        std::uint64_t x = next_u64();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = -n % n;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<unsigned __int128>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; consumes two uniforms per pair.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log1p(-u1)); // log(1-u1), never log(0)
        const double t = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    /// Independent child generator for stream `id`. Children with distinct
    /// ids are decorrelated regardless of how much of this stream was used.
    Rng derive(std::uint64_t id) const {
        return Rng(splitmix64(seed_ + 0x9E3779B97F4A7C15ULL * (id + 1)));
    }

    /// SplitMix64 finalizer; used for seed derivation.
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace srise
