#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace spdnn {

using RngSeed = std::uint64_t;

/// SplitMix64 finalizer. Used to expand seeds and to derive child seeds.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Mixes a master seed with a sequence of stream labels into a child seed.
/// derive_seed(s, {a, b}) == derive_seed(derive_seed(s, {a}), {b}).
RngSeed derive_seed(RngSeed master, std::initializer_list<std::uint64_t> labels) noexcept;

/// Stable 64-bit FNV-1a hash for string stream labels (e.g. DGP names).
std::uint64_t label_hash(std::string_view label) noexcept;

/// xoshiro256** 1.0 seeded through SplitMix64. Satisfies
/// UniformRandomBitGenerator, but the helpers below are used in preference to
/// <random> distributions so that streams are identical across standard
/// libraries.
class Rng {
public:
    using result_type = std::uint64_t;

    static constexpr std::string_view name = "xoshiro256starstar-v1";

    explicit Rng(RngSeed seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept;

    /// Uniform integer on [0, bound) without modulo bias. bound must be > 0.
    std::uint64_t below(std::uint64_t bound) noexcept;

    RngSeed seed() const noexcept { return seed_; }

private:
    std::array<std::uint64_t, 4> s_{};
    RngSeed seed_;
};

}  // namespace spdnn
