#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace scnp {

// Deterministic generator used everywhere randomness is needed.  splitmix64
// core with hand-rolled float conversions so results are identical across
// platforms and standard libraries.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

    /// Box-Muller; one normal per call (the sine twin is discarded to keep
    /// the stream position independent of call parity).
    double normal(double mu = 0.0, double sigma = 1.0) {
        double u1 = uniform01();
        double u2 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        double r = std::sqrt(-2.0 * std::log(u1));
        return mu + sigma * r * std::cos(6.283185307179586 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& xs) {
        for (std::size_t i = xs.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(xs[i - 1], xs[j]);
        }
    }
};

/// Derives an independent child seed from (seed, stream tag).  Used to give
/// weight init, shuffling and data generation their own streams.
inline std::uint64_t substream(std::uint64_t seed, std::uint64_t tag) {
    Rng r(seed ^ (0x6a09e667f3bcc909ULL + tag * 0x3c6ef372fe94f82bULL));
    r.next_u64();
    return r.next_u64();
}

namespace stream {
constexpr std::uint64_t weights = 1;
constexpr std::uint64_t shuffle = 2;
constexpr std::uint64_t data = 3;
constexpr std::uint64_t gradcheck = 4;
} // namespace stream

} // namespace scnp
