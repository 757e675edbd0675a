#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace rainbow {

using Seed = std::uint64_t;

// SplitMix64 finalizer; used only to decorrelate derived seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Stream-splitting rule shared by every seeded component.
///
/// The first component is XORed into the master seed (for trials this is the
/// trial index, so stream = master ^ trial), the result is passed through
/// SplitMix64, and each further component is folded in the same way:
///
///     s0 = splitmix64(master ^ parts[0]);  s_i = splitmix64(s_{i-1} ^ parts[i])
Seed derive_seed(Seed master, std::initializer_list<std::uint64_t> parts) noexcept;

/// Reproducible generator: std::mt19937_64 with hand-rolled distributions.
///
/// The standard distribution objects are implementation-defined, so the
/// bit-to-value mapping lives here to keep outputs identical across
/// standard libraries.
class Rng {
public:
    explicit Rng(Seed seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

private:
    std::mt19937_64 engine_;
};

}  // namespace rainbow
