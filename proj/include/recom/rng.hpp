#pragma once

#include <cstdint>
#include <random>

namespace recom {

// Deterministic random source used by all samplers.
//
// The engine is std::mt19937_64, whose output sequence is pinned by the
// C++ standard, so a (seed, call sequence) pair replays bit-identically on
// any platform. Bounded draws use masked rejection rather than
// std::uniform_int_distribution, which is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased integer in [0, n), n >= 1: draw bit_width(n-1) bits, retry
    // until the value lands below n.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t mask = mask_for(n - 1);
        std::uint64_t v;
        do {
            v = engine_() & mask;
        } while (v >= n);
        return v;
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    bool coin() { return (engine_() & 1u) != 0; }

  private:
    static std::uint64_t mask_for(std::uint64_t max_value) {
        std::uint64_t mask = max_value;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        return mask;
    }

    std::mt19937_64 engine_;
};

}  // namespace recom
