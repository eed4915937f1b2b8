#pragma once

#include <cstdint>
#include <random>

#include <doctest.h>

namespace proptest {

/// Draws inputs for a property check. Seeded so a failure replays exactly.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    std::uint64_t u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Runs `body(gen)` for `cases` inputs; the case index is reported on failure.
template <class Body>
void for_all(int cases, std::uint64_t seed, Body&& body)
{
    Gen gen(seed);
    for (int i = 0; i < cases; ++i) {
        CAPTURE(i);
        body(gen);
    }
}

}  // namespace proptest
