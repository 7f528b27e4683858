#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "leaklab/hash.hpp"

namespace leaklab {

// Deterministic RNG. mt19937_64 supplies bits; the uniform/normal transforms
// are done here rather than with std distributions because those are
// implementation-defined and the repo's contract is bit-identical replay.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        // Lemire's multiply-shift with rejection; exact and fast.
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t t = (0ULL - n) % n;
            while (lo < t) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    int uniform_int(int lo, int hi_inclusive) {
        return lo + static_cast<int>(uniform_index(static_cast<std::uint64_t>(hi_inclusive - lo + 1)));
    }

    // Marsaglia polar method, no cached spare so replay never depends on call
    // parity across objects.
    double normal() {
        for (;;) {
            double u = 2.0 * uniform() - 1.0;
            double v = 2.0 * uniform() - 1.0;
            double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// Seed derivation: mix named context into a parent seed so parallel tasks and
// sub-streams never collide by accident.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view context) {
    return Fnv1a{}.u64(base).str(context).digest();
}

inline std::uint64_t derive_seed(std::uint64_t base, std::string_view context, std::uint64_t index) {
    return Fnv1a{}.u64(base).str(context).u64(index).digest();
}

inline std::vector<int> identity_indices(std::size_t n) {
    std::vector<int> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
    return idx;
}

} // namespace leaklab
