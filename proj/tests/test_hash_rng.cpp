#include <doctest.h>

#include <set>

#include "leaklab/hash.hpp"
#include "leaklab/rng.hpp"

using namespace leaklab;

TEST_SUITE("hash_rng") {

TEST_CASE("fnv1a matches the reference vectors") {
    // published FNV-1a 64-bit test vectors
    CHECK(fnv1a("") == 14695981039346656037ULL);
    CHECK(fnv1a("a") == 12638187200555641996ULL);
    CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("field-wise hashing is order sensitive and canonical") {
    const auto h1 = Fnv1a{}.str("ab").str("c").digest();
    const auto h2 = Fnv1a{}.str("a").str("bc").digest();
    CHECK(h1 == h2); // bytes only: framing is the caller's job
    CHECK(Fnv1a{}.u64(1).u64(2).digest() != Fnv1a{}.u64(2).u64(1).digest());
    CHECK(Fnv1a{}.f64(0.0).digest() == Fnv1a{}.f64(-0.0).digest());
}

TEST_CASE("rng streams replay bit-identically") {
    Rng a(123), b(123);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform stays in [0,1) and is non-degenerate") {
    Rng rng(7);
    double lo = 1.0, hi = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo < 0.01);
    CHECK(hi > 0.99);
}

TEST_CASE("uniform_index covers the range") {
    Rng rng(9);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) seen.insert(rng.uniform_index(7));
    CHECK(seen.size() == 7);
    CHECK(*seen.rbegin() == 6);
}

TEST_CASE("normal draws have roughly unit variance") {
    Rng rng(11);
    double sum = 0, ss = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        ss += x * x;
    }
    const double mean = sum / n;
    CHECK(std::abs(mean) < 0.03);
    CHECK(std::abs(ss / n - mean * mean - 1.0) < 0.05);
}

TEST_CASE("derive_seed separates contexts and indices") {
    CHECK(derive_seed(1, "folds") != derive_seed(1, "model"));
    CHECK(derive_seed(1, "tree", 0) != derive_seed(1, "tree", 1));
    CHECK(derive_seed(1, "tree", 0) == derive_seed(1, "tree", 0));
}

} // TEST_SUITE
