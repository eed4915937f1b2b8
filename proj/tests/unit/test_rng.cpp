#include <doctest.h>

#include <set>

#include "noisyodds/rng.hpp"
#include "property.hpp"

using namespace noisyodds::rng;

TEST_SUITE("rng") {
    TEST_CASE("philox known answers") {
        CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
        CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
              Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
        CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
              Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
    }

    TEST_CASE("trial streams replay and differ") {
        TrialStream a(7, 3), b(7, 3), other_trial(7, 4), other_seed(8, 3);
        for (int i = 0; i < 10; ++i) {
            const auto x = a.next_u64();
            CHECK(x == b.next_u64());
            CHECK(x != other_trial.next_u64());
            CHECK(x != other_seed.next_u64());
        }
    }

    TEST_CASE("uniform stays in the unit interval with a plausible mean") {
        TrialStream s(1, 0);
        double sum = 0.0;
        constexpr int n = 200000;
        for (int i = 0; i < n; ++i) {
            const double u = s.uniform();
            REQUIRE(u >= 0.0);
            REQUIRE(u < 1.0);
            sum += u;
        }
        // Standard error of the mean is 1 / sqrt(12 n), about 6.5e-4.
        CHECK(sum / n == doctest::Approx(0.5).epsilon(0.004));
    }

    TEST_CASE("to_unit maps the extremes") {
        CHECK(to_unit(0) == 0.0);
        CHECK(to_unit(~std::uint64_t{0}) < 1.0);
        CHECK(to_unit(~std::uint64_t{0}) == doctest::Approx(1.0));
    }

    TEST_CASE("property: distinct trials rarely collide on the first word") {
        std::set<std::uint64_t> seen;
        proptest::for_all(2000, 11, [&](proptest::Gen& g) {
            const std::uint64_t seed = g.u64();
            const std::uint64_t trial = g.u64();
            CHECK(seen.insert(TrialStream(seed, trial).next_u64()).second);
        });
    }
}
