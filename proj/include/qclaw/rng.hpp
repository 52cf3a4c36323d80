#pragma once

#include <cstdint>
#include <random>

namespace qclaw {

// One splitmix64 step. Used to derive independent sub-seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Seeded random generator.
///
/// Wraps std::mt19937_64 (whose output sequence the standard pins down) but
/// implements its own bounded-integer and uniform-real draws: the <random>
/// distribution classes are free to differ between standard libraries, and
/// trial streams here must be reproducible byte-for-byte.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Independent stream seed for sub-task `index` of a run seeded with `base`.
    static std::uint64_t derive(std::uint64_t base, std::uint64_t index) {
        return mix_seed(base ^ mix_seed(index + 0x632be59bd9b4e019ull));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Unbiased draw from [0, n). n must be >= 1.
    std::uint64_t below(std::uint64_t n) {
        if ((n & (n - 1)) == 0) {
            return gen_() & (n - 1);
        }
        const std::uint64_t min = (0 - n) % n;  // 2^64 mod n
        for (;;) {
            const std::uint64_t r = gen_();
            if (r >= min) return r % n;
        }
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 gen_;
};

}  // namespace qclaw
