#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <set>

#include "spdnn/rng.hpp"

using namespace spdnn;

TEST_CASE("splitmix64 matches the reference output for state 0") {
    std::uint64_t state = 0;
    CHECK(splitmix64(state) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(state) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("label_hash is FNV-1a") {
    CHECK(label_hash("") == 0xcbf29ce484222325ULL);
    CHECK(label_hash("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(label_hash("dgp1") != label_hash("dgp2"));
}

TEST_CASE("derive_seed composes label by label") {
    CHECK(derive_seed(42, {1, 2}) == derive_seed(derive_seed(42, {1}), {2}));
    CHECK(derive_seed(42, {1}) != derive_seed(42, {2}));
    CHECK(derive_seed(42, {1}) != derive_seed(43, {1}));
}

TEST_CASE("same seed gives the same stream") {
    Rng a(7), b(7), c(8);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a();
        CHECK(x == b());
        differs = differs || x != c();
    }
    CHECK(differs);
}

TEST_CASE("uniform lies in [0, 1) with mean 1/2") {
    Rng rng(1);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("below covers every value and nothing else") {
    Rng rng(3);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const auto v = rng.below(7);
        REQUIRE(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
    CHECK(rng.below(1) == 0);
}

TEST_CASE("uniform(lo, hi) respects its bounds") {
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        const double v = rng.uniform(-2.0, 3.0);
        REQUIRE(v >= -2.0);
        REQUIRE(v < 3.0);
    }
}
