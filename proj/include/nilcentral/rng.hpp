#pragma once

#include <cstdint>
#include <random>

#include "nilcentral/error.hpp"

namespace nilcentral {

/// Deterministic random source. Same seed, same platform-independent stream:
/// draws go through explicit modular reduction, never distribution objects.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform-enough integer in [lo, hi], inclusive. The modulo bias is
    /// irrelevant for the tiny ranges used here and keeps the stream portable.
    long long int_in(long long lo, long long hi) {
        if (lo > hi) throw domain_error("int_in: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long long>(engine_() % span);
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace nilcentral
