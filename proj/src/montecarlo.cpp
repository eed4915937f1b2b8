#include "noisyodds/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "noisyodds/errors.hpp"
#include "noisyodds/fairsolver.hpp"
#include "noisyodds/rng.hpp"
#include "parallel.hpp"

namespace noisyodds {

namespace {

constexpr double kEvens = 2.0;

bool accepts(OddsRule rule, double odds) noexcept
{
    switch (rule) {
    case OddsRule::Always:
        return true;
    case OddsRule::AtLeastEvens:
        return odds >= kEvens;
    case OddsRule::AtMostEvens:
        return odds <= kEvens;
    }
    return false;
}

double draw_truth(const TruthMode& mode, rng::TrialStream& stream) noexcept
{
    return mode.kind == TruthMode::Kind::Fixed ? mode.p : stream.uniform();
}

double adjustment_for(const GameConfig& config, Variant variant, double p_c) noexcept
{
    if (config.adjustment != AdjustmentMode::FairSolver || config.epsilon <= 0.0 || p_c <= 0.0 || p_c >= 1.0) {
        return 0.0;
    }
    return fair_adjustment_fast(variant, p_c, config.epsilon);
}

// Settles the wager once both sides have accepted; the buyer wins odds - 1
// when the event happens and loses the unit stake otherwise.
void settle(GameRecord& r, rng::TrialStream& stream) noexcept
{
    const bool event = stream.uniform() < r.p_t;
    if (r.action_buyer != Action::Bet || r.action_seller != Action::Bet) {
        return;
    }
    r.outcome = event ? Outcome::Win : Outcome::Lose;
    r.payoff_buyer = event ? r.odds - 1.0 : -1.0;
    r.payoff_seller = -r.payoff_buyer;
}

template <class Trial>
void run_game(const GameConfig& config, const RecordSink& sink, Trial trial)
{
    detail::for_each_chunk(
        config.trials, resolve_threads(config.threads),
        [&](std::uint64_t first, std::uint64_t last) {
            std::vector<GameRecord> block;
            block.reserve(last - first);
            for (std::uint64_t id = first; id < last; ++id) {
                block.push_back(trial(config, id));
            }
            return block;
        },
        [&](std::vector<GameRecord>&& block) { sink(block); });
}

GameLedger collect(const GameConfig& config, void (*run)(const GameConfig&, const RecordSink&))
{
    GameLedger ledger;
    ledger.reserve(config.trials);
    run(config, [&](std::span<const GameRecord> block) { ledger.insert(ledger.end(), block.begin(), block.end()); });
    return ledger;
}

void append_double(std::string& line, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    line += buf;
}

}  // namespace

std::string_view to_string(Action a) noexcept
{
    return a == Action::Bet ? "Bet" : "Abandon";
}

std::string_view to_string(Role r) noexcept
{
    switch (r) {
    case Role::Buyer:
        return "Buyer";
    case Role::Seller:
        return "Seller";
    case Role::NoTrade:
        return "NoTrade";
    }
    return "?";
}

std::string_view to_string(Outcome o) noexcept
{
    switch (o) {
    case Outcome::Win:
        return "Win";
    case Outcome::Lose:
        return "Lose";
    case Outcome::NoBet:
        return "NoBet";
    }
    return "?";
}

Action StrategyMatrix::buyer_action(double odds) const noexcept
{
    return accepts(buyer, odds) ? Action::Bet : Action::Abandon;
}

Action StrategyMatrix::seller_action(double odds) const noexcept
{
    return accepts(seller, odds) ? Action::Bet : Action::Abandon;
}

std::string StrategyMatrix::name() const
{
    if (buyer == OddsRule::Always && seller == OddsRule::Always) {
        return "always";
    }
    if (buyer == OddsRule::AtLeastEvens && seller == OddsRule::AtMostEvens) {
        return "figure5";
    }
    return "custom";
}

StrategyMatrix figure5_strategy() noexcept
{
    return {OddsRule::AtLeastEvens, OddsRule::AtMostEvens};
}

StrategyMatrix parse_strategy(std::string_view name)
{
    if (name == "always") {
        return StrategyMatrix::always_bet();
    }
    if (name == "figure5") {
        return figure5_strategy();
    }
    throw ConfigError("unknown strategy '" + std::string(name) + "' (expected always or figure5)");
}

void GameConfig::validate(Variant variant) const
{
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw ConfigError("epsilon must lie in [0, 1]");
    }
    if (truth.kind == TruthMode::Kind::Fixed && !(truth.p >= 0.0 && truth.p <= 1.0)) {
        throw ConfigError("fixed p_t must lie in [0, 1]");
    }
    if (adjustment == AdjustmentMode::FairSolver && variant == Variant::BasicGame && weight_rule.w1() != 0.5) {
        throw ConfigError("fair adjustment is solved for equal weights; use w1 = 0.5");
    }
}

double GameRecord::payoff_player1() const noexcept
{
    switch (role_of_player1) {
    case Role::Buyer:
        return payoff_buyer;
    case Role::Seller:
        return payoff_seller;
    case Role::NoTrade:
        break;
    }
    return 0.0;
}

double GameRecord::payoff_player2() const noexcept
{
    switch (role_of_player1) {
    case Role::Buyer:
        return payoff_seller;
    case Role::Seller:
        return payoff_buyer;
    case Role::NoTrade:
        break;
    }
    return 0.0;
}

GameRecord play_trial(const GameConfig& config, std::uint64_t trial_id)
{
    rng::TrialStream stream(config.master_seed, trial_id);
    GameRecord r;
    r.trial_id = trial_id;
    r.p_t = draw_truth(config.truth, stream);
    const BeliefEnvelope env = belief_envelope(Probability(r.p_t), config.epsilon);
    const double p1 = sample_belief(env, stream).value();
    const double p2 = sample_belief(env, stream).value();

    const StrategyMatrix* buyer = &config.player1;
    const StrategyMatrix* seller = &config.player2;
    if (p1 > p2) {
        r.role_of_player1 = Role::Buyer;
        r.p_b = p1;
        r.p_s = p2;
    } else if (p1 < p2) {
        r.role_of_player1 = Role::Seller;
        r.p_b = p2;
        r.p_s = p1;
        std::swap(buyer, seller);
    } else {
        r.role_of_player1 = Role::NoTrade;
        r.p_b = p1;
        r.p_s = p2;
    }
    const double w1 = config.weight_rule.w1();
    r.p_c = r.p_b * (1.0 - w1) + r.p_s * w1;
    if (r.role_of_player1 == Role::NoTrade || !(r.p_c > 0.0)) {
        r.odds = r.p_c > 0.0 ? 1.0 / r.p_c : 0.0;
        return r;
    }
    r.m_applied = adjustment_for(config, Variant::BasicGame, r.p_c);
    r.odds = 1.0 / (r.p_c + r.m_applied);
    r.action_buyer = buyer->buyer_action(r.odds);
    r.action_seller = seller->seller_action(r.odds);
    settle(r, stream);
    return r;
}

GameRecord play_definetti_trial(const GameConfig& config, std::uint64_t trial_id)
{
    rng::TrialStream stream(config.master_seed, trial_id);
    GameRecord r;
    r.trial_id = trial_id;
    r.p_t = draw_truth(config.truth, stream);
    const BeliefEnvelope env = belief_envelope(Probability(r.p_t), config.epsilon);
    const double subject = sample_belief(env, stream).value();
    const double counterpart = sample_belief(env, stream).value();

    r.p_c = subject;
    if (!(subject > 0.0)) {
        return r;
    }
    r.m_applied = adjustment_for(config, Variant::DeFinetti, subject);
    r.odds = 1.0 / (subject + r.m_applied);
    // The counterpart backs the event at long odds and lays it at short odds.
    if (r.odds >= kEvens) {
        r.role_of_player1 = Role::Seller;
        r.p_s = subject;
        r.p_b = counterpart;
    } else {
        r.role_of_player1 = Role::Buyer;
        r.p_b = subject;
        r.p_s = counterpart;
    }
    r.action_buyer = Action::Bet;
    r.action_seller = Action::Bet;
    settle(r, stream);
    return r;
}

void simulate(const GameConfig& config, const RecordSink& sink)
{
    config.validate(Variant::BasicGame);
    run_game(config, sink, play_trial);
}

GameLedger simulate(const GameConfig& config)
{
    return collect(config, static_cast<void (*)(const GameConfig&, const RecordSink&)>(&simulate));
}

void simulate_definetti(const GameConfig& config, const RecordSink& sink)
{
    config.validate(Variant::DeFinetti);
    run_game(config, sink, play_definetti_trial);
}

GameLedger simulate_definetti(const GameConfig& config)
{
    return collect(config, static_cast<void (*)(const GameConfig&, const RecordSink&)>(&simulate_definetti));
}

MarginAccumulator::MarginAccumulator(RecordFilter filter, std::string description, NormalizePer per,
                                     PayoffOf payoff)
    : filter_(std::move(filter)), description_(std::move(description)), per_(per), payoff_(payoff)
{
}

void MarginAccumulator::add(const GameRecord& r)
{
    if (per_ == NormalizePer::Bet && !r.settled()) {
        return;
    }
    if (filter_ && !filter_(r)) {
        return;
    }
    double x = 0.0;
    switch (payoff_) {
    case PayoffOf::Seller:
        x = r.payoff_seller;
        break;
    case PayoffOf::Buyer:
        x = r.payoff_buyer;
        break;
    case PayoffOf::Player1:
        x = r.payoff_player1();
        break;
    case PayoffOf::Player2:
        x = r.payoff_player2();
        break;
    }
    ++n_;
    const double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
}

void MarginAccumulator::add(std::span<const GameRecord> block)
{
    for (const auto& r : block) {
        add(r);
    }
}

MarginEstimate MarginAccumulator::estimate() const
{
    if (n_ < 2) {
        throw ConfigError("margin estimate needs at least two selected records (" + description_ + ")");
    }
    const double n = static_cast<double>(n_);
    return {mean_, std::sqrt(m2_ / (n - 1.0) / n), n_, description_};
}

MarginEstimate estimate_margin(const GameLedger& ledger, const RecordFilter& filter, NormalizePer per,
                               std::string description, PayoffOf payoff)
{
    MarginAccumulator acc(filter, std::move(description), per, payoff);
    acc.add(ledger);
    return acc.estimate();
}

RecordFilter pc_bin(double center, double half_width)
{
    return [center, half_width](const GameRecord& r) { return std::fabs(r.p_c - center) <= half_width; };
}

MarginEstimate conditioned_margin_mc(double p_t, double epsilon, WeightRule rule, std::uint64_t n, std::uint64_t seed,
                                     unsigned threads)
{
    const BeliefEnvelope env = belief_envelope(Probability(p_t), epsilon);
    const double w1 = rule.w1();
    detail::RunningMoments total;
    detail::for_each_chunk(
        n, resolve_threads(threads),
        [&](std::uint64_t first, std::uint64_t last) {
            detail::RunningMoments part;
            for (std::uint64_t id = first; id < last; ++id) {
                rng::TrialStream stream(seed, id);
                const double a = sample_belief(env, stream).value();
                const double b = sample_belief(env, stream).value();
                if (a == b) {
                    continue;
                }
                const double p_b = std::max(a, b);
                const double p_s = std::min(a, b);
                const double p_c = p_b * (1.0 - w1) + p_s * w1;
                part.push((1.0 - p_t) - p_t * (1.0 / p_c - 1.0));
            }
            return part;
        },
        [&](detail::RunningMoments&& part) { total.merge(part); });
    if (total.n < 2) {
        throw ConfigError("conditioned margin needs at least two distinct belief pairs");
    }
    const double count = static_cast<double>(total.n);
    return {total.mean, std::sqrt(total.m2 / (count - 1.0) / count), total.n, "p_s < p_b"};
}

std::vector<double> Histogram::density() const
{
    std::vector<double> out(counts.size(), 0.0);
    if (accepted == 0) {
        return out;
    }
    const double scale = 1.0 / (static_cast<double>(accepted) * bin_width());
    std::transform(counts.begin(), counts.end(), out.begin(),
                   [scale](std::uint64_t c) { return static_cast<double>(c) * scale; });
    return out;
}

namespace {

void bin_into(std::vector<std::uint64_t>& counts, double lo, double hi, double x) noexcept
{
    const auto bins = counts.size();
    auto k = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins));
    counts[std::min(k, bins - 1)] += 1;
}

}  // namespace

Histogram assembly_histogram(Variant variant, double p_c, double half_width, double epsilon, std::uint64_t trials,
                             std::size_t bins, std::uint64_t seed, unsigned threads)
{
    if (!(epsilon > 0.0 && epsilon <= 1.0) || !(half_width > 0.0) || bins == 0) {
        throw ConfigError("assembly histogram needs 0 < epsilon <= 1, a positive window and at least one bin");
    }
    const double band_lo = std::max(0.0, posterior_support(std::max(p_c - half_width, 0.0), epsilon).first);
    const double band_hi = std::min(1.0, posterior_support(std::min(p_c + half_width, 1.0), epsilon).second);

    Histogram h;
    h.counts.assign(bins, 0);
    h.trials = trials;
    struct Part {
        std::vector<std::uint64_t> counts;
        std::uint64_t accepted = 0;
    };
    detail::for_each_chunk(
        trials, resolve_threads(threads),
        [&](std::uint64_t first, std::uint64_t last) {
            Part part{std::vector<std::uint64_t>(bins, 0), 0};
            for (std::uint64_t id = first; id < last; ++id) {
                rng::TrialStream stream(seed, id);
                const double t = band_lo + (band_hi - band_lo) * stream.uniform();
                const BeliefEnvelope env = belief_envelope(Probability(t), epsilon);
                const double a = sample_belief(env, stream).value();
                double consensus = a;
                if (variant == Variant::BasicGame) {
                    consensus = 0.5 * (a + sample_belief(env, stream).value());
                }
                if (std::fabs(consensus - p_c) <= half_width) {
                    bin_into(part.counts, 0.0, 1.0, t);
                    ++part.accepted;
                }
            }
            return part;
        },
        [&](Part&& part) {
            for (std::size_t i = 0; i < bins; ++i) {
                h.counts[i] += part.counts[i];
            }
            h.accepted += part.accepted;
        });
    return h;
}

Histogram consensus_histogram(double p_t, double epsilon, std::uint64_t pairs, std::size_t bins, std::uint64_t seed)
{
    const BeliefEnvelope env = belief_envelope(Probability(p_t), epsilon);
    if (env.degenerate() || bins == 0) {
        throw ConfigError("consensus histogram needs a non-degenerate envelope and at least one bin");
    }
    Histogram h;
    h.lo = env.l.value();
    h.hi = env.h.value();
    h.counts.assign(bins, 0);
    h.trials = pairs;
    h.accepted = pairs;
    for (std::uint64_t id = 0; id < pairs; ++id) {
        rng::TrialStream stream(seed, id);
        const double a = sample_belief(env, stream).value();
        const double b = sample_belief(env, stream).value();
        bin_into(h.counts, h.lo, h.hi, 0.5 * (a + b));
    }
    return h;
}

void write_ledger_csv(std::ostream& out, std::span<const GameRecord> records, bool header)
{
    if (header) {
        out << kLedgerHeader << '\n';
    }
    std::string line;
    for (const auto& r : records) {
        line.clear();
        line += std::to_string(r.trial_id);
        for (double v : {r.p_t, r.p_b, r.p_s}) {
            line += ',';
            append_double(line, v);
        }
        line += ',';
        line += to_string(r.role_of_player1);
        for (double v : {r.p_c, r.m_applied, r.odds}) {
            line += ',';
            append_double(line, v);
        }
        line += ',';
        line += to_string(r.action_buyer);
        line += ',';
        line += to_string(r.action_seller);
        line += ',';
        line += to_string(r.outcome);
        for (double v : {r.payoff_buyer, r.payoff_seller}) {
            line += ',';
            append_double(line, v);
        }
        line += '\n';
        out << line;
    }
}

unsigned resolve_threads(unsigned requested) noexcept
{
    if (requested > 0) {
        return requested;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace noisyodds
