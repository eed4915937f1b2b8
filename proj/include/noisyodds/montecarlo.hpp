#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noisyodds/beliefs.hpp"
#include "noisyodds/posterior.hpp"
#include "noisyodds/pricing.hpp"

namespace noisyodds {

enum class Action { Bet, Abandon };
enum class Role { Buyer, Seller, NoTrade };
enum class Outcome { Win, Lose, NoBet };

std::string_view to_string(Action a) noexcept;
std::string_view to_string(Role r) noexcept;
std::string_view to_string(Outcome o) noexcept;

/// When a player in a given role accepts the quoted decimal odds.
enum class OddsRule {
    Always,
    AtLeastEvens,  // odds >= 2
    AtMostEvens,   // odds <= 2
};

/// Post-quote decision of one player, as a function of role and odds.
struct StrategyMatrix {
    OddsRule buyer = OddsRule::Always;
    OddsRule seller = OddsRule::Always;

    Action buyer_action(double odds) const noexcept;
    Action seller_action(double odds) const noexcept;

    static StrategyMatrix always_bet() noexcept { return {}; }
    std::string name() const;
};

/// Buyer backs only long shots (odds above evens), seller lays only
/// favourites (odds below evens); at exactly evens both bet.
StrategyMatrix figure5_strategy() noexcept;

/// "always" or "figure5"; ConfigError otherwise.
StrategyMatrix parse_strategy(std::string_view name);

struct TruthMode {
    enum class Kind { Fixed, UniformPrior };
    Kind kind = Kind::UniformPrior;
    double p = 0.5;

    static TruthMode fixed(double p_t) noexcept { return {Kind::Fixed, p_t}; }
    static TruthMode uniform_prior() noexcept { return {Kind::UniformPrior, 0.5}; }
};

enum class AdjustmentMode { None, FairSolver };

struct GameConfig {
    TruthMode truth = TruthMode::uniform_prior();
    double epsilon = 0.5;
    WeightRule weight_rule = WeightRule::equal();
    StrategyMatrix player1 = StrategyMatrix::always_bet();
    StrategyMatrix player2 = StrategyMatrix::always_bet();
    AdjustmentMode adjustment = AdjustmentMode::None;
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;
    /// Worker threads; 0 means one per hardware thread. Never affects results.
    unsigned threads = 0;

    /// ConfigError on any invalid field.
    void validate(Variant variant) const;
};

struct GameRecord {
    std::uint64_t trial_id = 0;
    double p_t = 0.0;
    double p_b = 0.0;
    double p_s = 0.0;
    Role role_of_player1 = Role::NoTrade;
    double p_c = 0.0;
    double m_applied = 0.0;
    double odds = 0.0;
    Action action_buyer = Action::Abandon;
    Action action_seller = Action::Abandon;
    Outcome outcome = Outcome::NoBet;
    double payoff_buyer = 0.0;
    double payoff_seller = 0.0;

    bool settled() const noexcept { return outcome != Outcome::NoBet; }
    double payoff_player1() const noexcept;
    double payoff_player2() const noexcept;
};

using GameLedger = std::vector<GameRecord>;

/// Receives consecutive blocks of records in trial_id order.
using RecordSink = std::function<void(std::span<const GameRecord>)>;

/// Basic game: both players draw beliefs, the higher belief buys, the
/// consensus sets the odds and both strategies must accept.
void simulate(const GameConfig& config, const RecordSink& sink);
GameLedger simulate(const GameConfig& config);

/// Subject-weighted game: player 1 quotes odds from his own belief and
/// player 2 picks the side, buying when the odds are at least evens.
void simulate_definetti(const GameConfig& config, const RecordSink& sink);
GameLedger simulate_definetti(const GameConfig& config);

/// A single trial; exposed for tests.
GameRecord play_trial(const GameConfig& config, std::uint64_t trial_id);
GameRecord play_definetti_trial(const GameConfig& config, std::uint64_t trial_id);

struct MarginEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
    std::string filter_description;
};

enum class NormalizePer { Bet, Trial };
enum class PayoffOf { Seller, Buyer, Player1, Player2 };

using RecordFilter = std::function<bool(const GameRecord&)>;

/// Streaming mean / standard error (Welford) over selected records.
class MarginAccumulator {
public:
    MarginAccumulator(RecordFilter filter, std::string description, NormalizePer per = NormalizePer::Bet,
                      PayoffOf payoff = PayoffOf::Seller);

    void add(const GameRecord& r);
    void add(std::span<const GameRecord> block);

    std::uint64_t count() const noexcept { return n_; }
    const std::string& description() const noexcept { return description_; }

    /// Throws ConfigError when fewer than two records were selected.
    MarginEstimate estimate() const;

private:
    RecordFilter filter_;
    std::string description_;
    NormalizePer per_;
    PayoffOf payoff_;
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

MarginEstimate estimate_margin(const GameLedger& ledger, const RecordFilter& filter, NormalizePer per,
                               std::string description = "custom", PayoffOf payoff = PayoffOf::Seller);

/// Filter on |p_c - center| <= half_width.
RecordFilter pc_bin(double center, double half_width);

/// Monte Carlo of the conditional mean seller margin: draw p_b, p_s from the
/// envelope of p_t, keep pairs with p_s < p_b, average the seller's objective
/// margin at the consensus.
MarginEstimate conditioned_margin_mc(double p_t, double epsilon, WeightRule rule, std::uint64_t n,
                                     std::uint64_t seed, unsigned threads = 0);

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::uint64_t> counts;
    std::uint64_t accepted = 0;
    std::uint64_t trials = 0;

    double bin_width() const noexcept { return (hi - lo) / static_cast<double>(counts.size()); }
    /// Count-normalized density in each bin.
    std::vector<double> density() const;
};

/// Assembly oracle for the posterior: draw p_t from a uniform prior, draw the
/// consensus as the game forms it, keep trials whose consensus lands within
/// half_width of p_c, and histogram the kept p_t on [0, 1].
/// p_t is drawn uniformly on the band of truths able to reach the window,
/// which leaves the conditional law unchanged and wastes fewer draws.
Histogram assembly_histogram(Variant variant, double p_c, double half_width, double epsilon, std::uint64_t trials,
                             std::size_t bins, std::uint64_t seed, unsigned threads = 0);

/// Histogram of the equal-weight consensus (p_b + p_s) / 2 for fixed p_t on [L, H].
Histogram consensus_histogram(double p_t, double epsilon, std::uint64_t pairs, std::size_t bins, std::uint64_t seed);

/// Header plus one row per record; floats at 17 significant digits.
void write_ledger_csv(std::ostream& out, std::span<const GameRecord> records, bool header = true);
inline constexpr std::string_view kLedgerHeader =
    "trial_id,p_t,p_b,p_s,role_of_player1,p_c,m_applied,odds,action_buyer,action_seller,outcome,payoff_buyer,"
    "payoff_seller";

/// Worker count for a request: 0 becomes the hardware concurrency; at least 1.
unsigned resolve_threads(unsigned requested) noexcept;

}  // namespace noisyodds
