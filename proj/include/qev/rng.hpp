#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace qev {

/// Seedable deterministic generator. Every random decision in the simulator
/// flows through an injected Rng; there are no hidden entropy sources, so a
/// run replays bit-exactly from (config, seed).
///
/// The engine is std::mt19937_64 (bit-exact output per the standard). All
/// distributions are hand-rolled on top of the raw 64-bit stream because the
/// standard-library distribution objects are not guaranteed to produce the
/// same values across implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed)
        : base_seed_(seed), engine_(splitmix64(seed ^ 0x9e3779b97f4a7c15ull)) {}

    std::uint64_t u64() { return engine_(); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

    /// Fair coin.
    int bit() { return static_cast<int>(u64() >> 63); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Unbiased integer in [0, bound). bound must be positive.
    std::uint64_t uniform_int(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t r;
        do {
            r = u64();
        } while (r >= limit);
        return r % bound;
    }

    /// True iff `coins` fair flips all come up heads. Zero coins is vacuously
    /// all-heads (the deterministic variant of the coin-gated subroutines).
    bool all_heads(int coins) {
        for (int i = 0; i < coins; ++i) {
            if (bit() == 0) return false;
        }
        return true;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_int(i)]);
        }
    }

    /// Independent substream for parallel workers / per-trial streams.
    /// Derivation depends only on (base seed, stream id), not on how much of
    /// this generator has been consumed.
    Rng stream(std::uint64_t stream_id) const {
        return Rng(splitmix64(base_seed_ ^ splitmix64(stream_id + 0x51ed2701)));
    }

    std::uint64_t base_seed() const { return base_seed_; }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

private:
    std::uint64_t base_seed_;
    std::mt19937_64 engine_;
};

} // namespace qev
