#include <doctest.h>

#include <cmath>

#include "noisyodds/beliefs.hpp"
#include "noisyodds/errors.hpp"
#include "noisyodds/montecarlo.hpp"
#include "noisyodds/posterior.hpp"
#include "noisyodds/quadrature.hpp"
#include "oracle_values.hpp"
#include "property.hpp"

using namespace noisyodds;

namespace {

// Likelihood of the consensus c given the truth t, straight from the game:
// the average of two uniforms is triangular, a single uniform is flat.
double likelihood(Variant v, double c, double t, double eps)
{
    const double e = eps * std::min(t, 1.0 - t);
    if (e <= 0.0 || std::fabs(c - t) >= e) {
        return 0.0;
    }
    return v == Variant::BasicGame ? (e - std::fabs(c - t)) / (e * e) : 1.0 / (2.0 * e);
}

double total_probability(const PosteriorDensity& f)
{
    const auto bps = f.breakpoints();
    return integrate([&](double t) { return f(t); }, bps.front(), bps.back(), bps);
}

}  // namespace

TEST_SUITE("posterior") {
    TEST_CASE("variant names") {
        CHECK(parse_variant("basic") == Variant::BasicGame);
        CHECK(parse_variant("definetti") == Variant::DeFinetti);
        CHECK(to_string(Variant::DeFinetti) == "definetti");
        CHECK_THROWS_AS(parse_variant("poker"), ConfigError);
    }

    TEST_CASE("consensus density is the triangle on the envelope") {
        const auto env = belief_envelope(Probability(0.4), 0.5);
        CHECK(consensus_density(Probability(0.4), env) == doctest::Approx(1.0 / 0.2));
        CHECK(consensus_density(Probability(0.3), env) == doctest::Approx(2.5));
        CHECK(consensus_density(Probability(0.2), env) == doctest::Approx(0.0));
        CHECK(consensus_density(Probability(0.7), env) == 0.0);
        const double total = integrate([&](double x) { return consensus_density(Probability(x), env); }, 0.0, 1.0,
                                       std::array<double, 3>{0.2, 0.4, 0.6});
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        CHECK_THROWS_AS(consensus_density(Probability(0.4), belief_envelope(Probability(0.4), 0.0)), DegenerateError);
    }

    TEST_CASE("normalizers against the oracle") {
        CHECK(kernel_moments(Variant::BasicGame, 0.3, 0.5).mass == doctest::Approx(oracle::basic_mass_0p3_0p5).epsilon(1e-13));
        CHECK(kernel_moments(Variant::BasicGame, 0.3, 1.0).mass == doctest::Approx(oracle::basic_mass_0p3_1p0).epsilon(1e-13));
        CHECK(kernel_moments(Variant::BasicGame, 0.5, 0.5).mass == doctest::Approx(oracle::basic_mass_0p5_0p5).epsilon(1e-13));
        CHECK(kernel_moments(Variant::BasicGame, 0.7, 0.25).mass == doctest::Approx(oracle::basic_mass_0p7_0p25).epsilon(1e-13));
        CHECK(kernel_moments(Variant::DeFinetti, 0.3, 0.5).mass == doctest::Approx(oracle::definetti_mass_0p3_0p5).epsilon(1e-13));
        CHECK(kernel_moments(Variant::DeFinetti, 0.3, 1.0).mass == doctest::Approx(oracle::definetti_mass_0p3_1p0).epsilon(1e-13));
        CHECK(kernel_moments(Variant::DeFinetti, 0.45, 0.75).mass == doctest::Approx(oracle::definetti_mass_0p45_0p75).epsilon(1e-13));
        CHECK(kernel_moments(Variant::DeFinetti, 0.8, 0.5).mass == doctest::Approx(oracle::definetti_mass_0p8_0p5).epsilon(1e-13));
    }

    TEST_CASE("posterior mean against the oracle") {
        CHECK(PosteriorDensity(Probability(0.3), 0.5, Variant::BasicGame).mean() ==
              doctest::Approx(0.3 + oracle::basic_m_0p3_0p5).epsilon(1e-13));
        CHECK(PosteriorDensity(Probability(0.1), 0.5, Variant::DeFinetti).mean() ==
              doctest::Approx(0.1 + oracle::definetti_m_0p1_0p5).epsilon(1e-13));
    }

    TEST_CASE("normalization on a 5 x 3 grid") {
        for (auto v : {Variant::BasicGame, Variant::DeFinetti}) {
            for (double c : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                for (double eps : {0.25, 0.5, 1.0}) {
                    CAPTURE(c);
                    CAPTURE(eps);
                    CHECK(std::fabs(total_probability(PosteriorDensity(Probability(c), eps, v)) - 1.0) < 1e-9);
                }
            }
        }
    }

    TEST_CASE("support") {
        const auto [lo, hi] = posterior_support(0.3, 0.5);
        CHECK(lo == doctest::Approx(0.2));
        CHECK(hi == doctest::Approx(0.8 / 1.5));
        const auto [lo1, hi1] = posterior_support(0.3, 1.0);
        CHECK(lo1 == doctest::Approx(0.15));
        CHECK(hi1 == doctest::Approx(0.65));
    }

    TEST_CASE("errors") {
        CHECK_THROWS_AS(PosteriorDensity(Probability(0.3), 0.0, Variant::BasicGame), DomainError);
        CHECK_THROWS_AS(PosteriorDensity(Probability(0.3), 1.2, Variant::BasicGame), DomainError);
        CHECK_THROWS_AS(PosteriorDensity(Probability(0.0), 0.5, Variant::BasicGame), DegenerateError);
        CHECK_THROWS_AS(pt_density_given_pc(Probability(0.3), Probability(1.0), 0.5), DegenerateError);
        CHECK_THROWS_AS(definetti_pt_density(Probability(0.3), Probability(0.3), 0.0), DomainError);
    }

    TEST_CASE("property: literal kernels equal the game's likelihood") {
        proptest::for_all(5000, 8, [](proptest::Gen& g) {
            const double c = g.uniform(0.01, 0.99);
            const double eps = g.uniform(0.01, 1.0);
            const double t = g.uniform(0.001, 0.999);
            CHECK(pt_kernel_given_pc(t, c, eps) ==
                  doctest::Approx(likelihood(Variant::BasicGame, c, t, eps)).epsilon(1e-9).scale(1.0));
            CHECK(definetti_pt_kernel(t, c, eps) ==
                  doctest::Approx(likelihood(Variant::DeFinetti, c, t, eps)).epsilon(1e-9).scale(1.0));
        });
    }

    TEST_CASE("property: density is nonnegative and vanishes off the support") {
        proptest::for_all(300, 9, [](proptest::Gen& g) {
            const double c = g.uniform(0.01, 0.99);
            const double eps = g.uniform(0.01, 1.0);
            const auto v = g.uniform(0, 1) < 0.5 ? Variant::BasicGame : Variant::DeFinetti;
            const PosteriorDensity f(Probability(c), eps, v);
            const double lo = f.support_lo().value();
            const double hi = f.support_hi().value();
            CHECK(f(g.uniform(lo, hi)) >= 0.0);
            if (lo > 1e-3) {
                CHECK(f(g.uniform(0.0, lo - 1e-9)) == 0.0);
            }
            if (hi < 1.0 - 1e-3) {
                CHECK(f(g.uniform(hi + 1e-9, 1.0)) == 0.0);
            }
            CHECK(f.mean() > lo);
            CHECK(f.mean() < hi);
        });
    }

    TEST_CASE("property: normalization at random points") {
        proptest::for_all(200, 10, [](proptest::Gen& g) {
            const double c = g.uniform(0.01, 0.99);
            const double eps = g.uniform(0.01, 1.0);
            for (auto v : {Variant::BasicGame, Variant::DeFinetti}) {
                const PosteriorDensity f(Probability(c), eps, v);
                CHECK(std::fabs(total_probability(f) - 1.0) < 1e-9);
            }
        });
    }

    TEST_CASE("assembly histogram agrees with the density (small run)") {
        for (auto v : {Variant::BasicGame, Variant::DeFinetti}) {
            const auto h = assembly_histogram(v, 0.5, 0.005, 0.5, 4'000'000, 25, 21);
            const PosteriorDensity f(Probability(0.5), 0.5, v);
            const auto dens = h.density();
            double worst = 0.0;
            for (std::size_t i = 0; i < dens.size(); ++i) {
                const double a = h.lo + i * h.bin_width();
                const double expected =
                    integrate([&](double t) { return f(t); }, a, a + h.bin_width(), f.breakpoints()) / h.bin_width();
                worst = std::max(worst, std::fabs(dens[i] - expected));
            }
            CAPTURE(to_string(v));
            CHECK(worst < 0.1);
        }
    }
}
