#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>

namespace leaklab {

// FNV-1a, 64-bit. Stable digest used for content hashes, fold-plan hashes,
// discovery/confirmation assignment and per-task seed derivation. The exact
// algorithm is frozen: changing it invalidates recorded plan hashes.
class Fnv1a {
public:
    static constexpr std::uint64_t kOffset = 1469598103934665603ULL;
    static constexpr std::uint64_t kPrime = 1099511628211ULL;

    Fnv1a() = default;

    Fnv1a& bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            state_ ^= b[i];
            state_ *= kPrime;
        }
        return *this;
    }

    Fnv1a& str(std::string_view s) { return bytes(s.data(), s.size()); }

    Fnv1a& u64(std::uint64_t v) {
        // little-endian canonical form regardless of host
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
        return bytes(b, 8);
    }

    Fnv1a& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }

    Fnv1a& f64(double v) {
        if (v == 0.0) v = 0.0; // collapse -0.0
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        return u64(bits);
    }

    std::uint64_t digest() const { return state_; }

private:
    std::uint64_t state_ = kOffset;
};

inline std::uint64_t fnv1a(std::string_view s) { return Fnv1a{}.str(s).digest(); }

} // namespace leaklab
