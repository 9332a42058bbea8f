#pragma once

#include <array>
#include <cstdint>

namespace msadl {

/// SplitMix64, used only to expand a 64-bit seed into xoshiro state.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();

private:
    std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman & Vigna). Fixed algorithm so schedules are
/// reproducible across platforms and standard libraries.
class Xoshiro256StarStar {
public:
    explicit Xoshiro256StarStar(std::uint64_t seed);

    std::uint64_t next();
    /// Unbiased integer in [0, bound), bound > 0 (Lemire's method).
    std::uint64_t below(std::uint64_t bound);

    friend bool operator==(const Xoshiro256StarStar&, const Xoshiro256StarStar&) = default;

private:
    std::array<std::uint64_t, 4> s_{};
};

}  // namespace msadl
