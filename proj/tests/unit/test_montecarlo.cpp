#include <doctest.h>

#include <cmath>
#include <sstream>

#include "noisyodds/errors.hpp"
#include "noisyodds/fairsolver.hpp"
#include "noisyodds/montecarlo.hpp"
#include "noisyodds/pricing.hpp"
#include "property.hpp"

using namespace noisyodds;

namespace {

GameConfig small_game(std::uint64_t trials = 20000)
{
    GameConfig g;
    g.epsilon = 0.5;
    g.trials = trials;
    g.master_seed = 99;
    return g;
}

bool same(const GameRecord& a, const GameRecord& b)
{
    return a.trial_id == b.trial_id && a.p_t == b.p_t && a.p_b == b.p_b && a.p_s == b.p_s &&
           a.role_of_player1 == b.role_of_player1 && a.p_c == b.p_c && a.m_applied == b.m_applied &&
           a.odds == b.odds && a.action_buyer == b.action_buyer && a.action_seller == b.action_seller &&
           a.outcome == b.outcome && a.payoff_buyer == b.payoff_buyer && a.payoff_seller == b.payoff_seller;
}

}  // namespace

TEST_SUITE("montecarlo") {
    TEST_CASE("names") {
        CHECK(to_string(Role::Buyer) == "Buyer");
        CHECK(to_string(Outcome::NoBet) == "NoBet");
        CHECK(to_string(Action::Abandon) == "Abandon");
        CHECK(parse_strategy("figure5").buyer == OddsRule::AtLeastEvens);
        CHECK(parse_strategy("always").seller == OddsRule::Always);
        CHECK_THROWS_AS(parse_strategy("greedy"), ConfigError);
    }

    TEST_CASE("strategy matrix decisions") {
        const auto s = figure5_strategy();
        CHECK(s.buyer_action(3.0) == Action::Bet);
        CHECK(s.buyer_action(1.5) == Action::Abandon);
        CHECK(s.seller_action(1.5) == Action::Bet);
        CHECK(s.seller_action(3.0) == Action::Abandon);
        CHECK(s.buyer_action(2.0) == Action::Bet);
        CHECK(s.seller_action(2.0) == Action::Bet);
        CHECK(StrategyMatrix::always_bet().seller_action(100.0) == Action::Bet);
    }

    TEST_CASE("configuration validation") {
        auto g = small_game();
        g.trials = 0;
        CHECK_THROWS_AS(g.validate(Variant::BasicGame), ConfigError);
        g = small_game();
        g.epsilon = 1.5;
        CHECK_THROWS_AS(g.validate(Variant::BasicGame), ConfigError);
        g = small_game();
        g.truth = TruthMode::fixed(1.2);
        CHECK_THROWS_AS(g.validate(Variant::BasicGame), ConfigError);
        g = small_game();
        g.adjustment = AdjustmentMode::FairSolver;
        g.weight_rule = WeightRule(0.3);
        CHECK_THROWS_AS(g.validate(Variant::BasicGame), ConfigError);
        CHECK_NOTHROW(g.validate(Variant::DeFinetti));
    }

    TEST_CASE("results do not depend on the thread count") {
        auto g = small_game(200000);
        g.threads = 1;
        const auto serial = simulate(g);
        g.threads = 4;
        const auto parallel = simulate(g);
        REQUIRE(serial.size() == parallel.size());
        bool all_same = true;
        for (std::size_t i = 0; i < serial.size(); ++i) {
            all_same = all_same && same(serial[i], parallel[i]) && serial[i].trial_id == i;
        }
        CHECK(all_same);
        CHECK(same(play_trial(g, 12345), serial[12345]));
    }

    TEST_CASE("property: game records obey the rules") {
        auto g = small_game(50000);
        g.player1 = figure5_strategy();
        g.adjustment = AdjustmentMode::FairSolver;
        const auto ledger = simulate(g);
        proptest::for_all(2000, 16, [&](proptest::Gen& gen) {
            const auto& r = ledger[gen.u64() % ledger.size()];
            CHECK(r.p_b >= r.p_s);
            CHECK(r.p_c == doctest::Approx(0.5 * (r.p_b + r.p_s)));
            if (r.role_of_player1 == Role::NoTrade) {
                CHECK(r.outcome == Outcome::NoBet);
                return;
            }
            CHECK(r.m_applied == doctest::Approx(fair_adjustment_fast(Variant::BasicGame, r.p_c, 0.5)));
            CHECK(r.odds == doctest::Approx(1.0 / (r.p_c + r.m_applied)));
            CHECK(r.payoff_buyer == -r.payoff_seller);
            switch (r.outcome) {
            case Outcome::Win:
                CHECK(r.payoff_buyer == doctest::Approx(r.odds - 1.0));
                break;
            case Outcome::Lose:
                CHECK(r.payoff_buyer == -1.0);
                break;
            case Outcome::NoBet:
                CHECK(r.payoff_buyer == 0.0);
                CHECK((r.action_buyer == Action::Abandon || r.action_seller == Action::Abandon));
                break;
            }
            const double mine = r.role_of_player1 == Role::Buyer ? r.payoff_buyer : r.payoff_seller;
            CHECK(r.payoff_player1() == mine);
            CHECK(r.payoff_player2() == -mine);
        });
    }

    TEST_CASE("zero noise never trades") {
        auto g = small_game(1000);
        g.epsilon = 0.0;
        for (const auto& r : simulate(g)) {
            CHECK(r.role_of_player1 == Role::NoTrade);
            CHECK(r.payoff_buyer == 0.0);
        }
    }

    TEST_CASE("single-quote game: the subject always bets") {
        auto g = small_game(5000);
        for (const auto& r : simulate_definetti(g)) {
            CHECK(r.outcome != Outcome::NoBet);
            CHECK(r.p_c == ((r.role_of_player1 == Role::Seller) ? r.p_s : r.p_b));
            CHECK((r.odds >= 2.0) == (r.role_of_player1 == Role::Seller));
        }
    }

    TEST_CASE("accumulator") {
        MarginAccumulator acc(nullptr, "all");
        CHECK_THROWS_AS(acc.estimate(), ConfigError);
        GameRecord r;
        r.outcome = Outcome::Win;
        r.payoff_seller = 1.0;
        acc.add(r);
        r.payoff_seller = 3.0;
        acc.add(r);
        r.outcome = Outcome::NoBet;
        acc.add(r);
        const auto e = acc.estimate();
        CHECK(e.n == 2);
        CHECK(e.mean == doctest::Approx(2.0));
        CHECK(e.std_error == doctest::Approx(1.0));

        MarginAccumulator per_trial(nullptr, "all", NormalizePer::Trial);
        per_trial.add(r);
        per_trial.add(r);
        CHECK(per_trial.estimate().n == 2);
        CHECK(pc_bin(0.3, 0.01)(GameRecord{.p_c = 0.305}));
        CHECK_FALSE(pc_bin(0.3, 0.01)(GameRecord{.p_c = 0.32}));
    }

    TEST_CASE("conditioned margin agrees with the closed form") {
        for (double p : {0.2, 0.5, 0.8}) {
            for (double eps : {0.3, 1.0}) {
                const auto mc = conditioned_margin_mc(p, eps, WeightRule(0.5), 1'000'000, 5);
                const double closed = conditional_mean_seller_margin(Probability(p), eps, WeightRule(0.5));
                CAPTURE(p);
                CAPTURE(eps);
                CHECK(std::fabs(mc.mean - closed) <= 3.0 * mc.std_error);
            }
        }
    }

    TEST_CASE("consensus histogram is the triangle") {
        const auto h = consensus_histogram(0.4, 0.5, 2'000'000, 20, 3);
        CHECK(h.lo == doctest::Approx(0.2));
        CHECK(h.hi == doctest::Approx(0.6));
        const auto d = h.density();
        for (std::size_t i = 0; i < d.size(); ++i) {
            const double mid = h.lo + (i + 0.5) * h.bin_width();
            const double tri = (0.2 - std::fabs(mid - 0.4)) / 0.04;
            CHECK(d[i] == doctest::Approx(tri).epsilon(0.05).scale(1.0));
        }
    }

    TEST_CASE("ledger csv") {
        auto g = small_game(3);
        std::ostringstream out;
        write_ledger_csv(out, simulate(g));
        const std::string text = out.str();
        CHECK(text.rfind(std::string(kLedgerHeader) + "\n", 0) == 0);
        CHECK(std::count(text.begin(), text.end(), '\n') == 4);
    }
}
