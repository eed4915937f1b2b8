#include <doctest.h>

#include <cmath>

#include "noisyodds/beliefs.hpp"
#include "noisyodds/errors.hpp"
#include "property.hpp"

using namespace noisyodds;

TEST_SUITE("beliefs") {
    TEST_CASE("probability validates its range") {
        CHECK_NOTHROW(Probability(0.0));
        CHECK_NOTHROW(Probability(1.0));
        CHECK_THROWS_AS(Probability(-1e-12), DomainError);
        CHECK_THROWS_AS(Probability(1.0 + 1e-12), DomainError);
        CHECK_THROWS_AS(Probability(std::nan("")), DomainError);
        CHECK(Probability(0.25).complement().value() == 0.75);
    }

    TEST_CASE("weight of evidence round trip and known values") {
        CHECK(probability_to_woe(Probability(0.5)).bans == 0.0);
        CHECK(probability_to_woe(Probability(0.9)).bans == doctest::Approx(std::log10(9.0)));
        CHECK(woe_to_probability({1.0}).value() == doctest::Approx(10.0 / 11.0));
        CHECK_THROWS_AS(probability_to_woe(Probability(0.0)), DomainError);
        CHECK_THROWS_AS(probability_to_woe(Probability(1.0)), DomainError);
        proptest::for_all(500, 1, [](proptest::Gen& g) {
            const double p = g.uniform(1e-6, 1 - 1e-6);
            CHECK(woe_to_probability(probability_to_woe(Probability(p))).value() == doctest::Approx(p).epsilon(1e-12));
        });
    }

    TEST_CASE("envelope endpoints") {
        const auto wide = belief_envelope(Probability(0.5), 1.0);
        CHECK(wide.l.value() == 0.0);
        CHECK(wide.h.value() == 1.0);
        const auto low = belief_envelope(Probability(0.2), 0.5);
        CHECK(low.e == doctest::Approx(0.1));
        CHECK(low.l.value() == doctest::Approx(0.1));
        CHECK(low.h.value() == doctest::Approx(0.3));
        CHECK(belief_envelope(Probability(0.3), 0.0).degenerate());
        CHECK(belief_envelope(Probability(1.0), 0.7).degenerate());
        CHECK_THROWS_AS(belief_envelope(Probability(0.3), 1.5), DomainError);
        CHECK_THROWS_AS(belief_envelope(Probability(0.3), -0.1), DomainError);
    }

    TEST_CASE("property: envelope is symmetric, inside [0,1] and inside the rhombus") {
        proptest::for_all(1000, 2, [](proptest::Gen& g) {
            const double p = g.uniform(0.0, 1.0);
            const double eps = g.uniform(0.0, 1.0);
            const auto env = belief_envelope(Probability(p), eps);
            CHECK(env.l.value() >= 0.0);
            CHECK(env.h.value() <= 1.0);
            CHECK(env.h.value() - p == doctest::Approx(p - env.l.value()));
            const auto r = rhombus_bounds(p, eps);
            CHECK(r.lower() == doctest::Approx(env.l.value()));
            CHECK(r.upper() == doctest::Approx(env.h.value()));
            // Mirror image about one half.
            const auto mirror = belief_envelope(Probability(1.0 - p), eps);
            CHECK(mirror.l.value() == doctest::Approx(1.0 - env.h.value()));
        });
    }

    TEST_CASE("sampling maps the unit interval onto the envelope") {
        const auto env = belief_envelope(Probability(0.4), 0.5);
        CHECK(sample_belief(env, 0.0).value() == doctest::Approx(env.l.value()));
        CHECK(sample_belief(env, 0.5).value() == doctest::Approx(0.4));
        rng::TrialStream s(3, 9);
        for (int i = 0; i < 1000; ++i) {
            const double b = sample_belief(env, s).value();
            CHECK(b >= env.l.value());
            CHECK(b <= env.h.value());
        }
    }

    TEST_CASE("evidence distribution") {
        const auto env = belief_envelope(Probability(0.5), 0.5);
        const auto [lo, hi] = woe_support(env);
        CHECK(lo == doctest::Approx(std::log10(1.0 / 3.0)));
        CHECK(hi == doctest::Approx(std::log10(3.0)));
        CHECK(woe_cdf({lo}, env) == doctest::Approx(0.0));
        CHECK(woe_cdf({0.0}, env) == doctest::Approx(0.5));
        CHECK(woe_cdf({hi}, env) == doctest::Approx(1.0));
        CHECK(woe_pdf({hi + 1.0}, env) == 0.0);

        const auto open = woe_support(belief_envelope(Probability(0.5), 1.0));
        CHECK(std::isinf(open.first));
        CHECK(std::isinf(open.second));
        CHECK_THROWS_AS(woe_cdf({0.0}, belief_envelope(Probability(0.5), 0.0)), DegenerateError);
        CHECK_THROWS_AS(woe_pdf({0.0}, belief_envelope(Probability(0.5), 0.0)), DegenerateError);
    }

    TEST_CASE("property: evidence pdf is the derivative of the cdf") {
        proptest::for_all(300, 3, [](proptest::Gen& g) {
            const auto env = belief_envelope(Probability(g.uniform(0.05, 0.95)), g.uniform(0.05, 0.95));
            const auto [lo, hi] = woe_support(env);
            const double w = g.uniform(lo + 1e-3, hi - 1e-3);
            const double h = 1e-6;
            const double numeric = (woe_cdf({w + h}, env) - woe_cdf({w - h}, env)) / (2 * h);
            CHECK(woe_pdf({w}, env) == doctest::Approx(numeric).epsilon(1e-5));
        });
    }
}
