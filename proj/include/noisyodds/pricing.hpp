#pragma once

#include "noisyodds/beliefs.hpp"

namespace noisyodds {

/// Weight placed on the seller's probability; the buyer's gets 1 - w1.
class WeightRule {
public:
    /// Throws DomainError unless 0 <= w1 <= 1.
    explicit WeightRule(double w1);
    static WeightRule equal() { return WeightRule(0.5); }

    double w1() const noexcept { return w1_; }

private:
    double w1_;
};

struct ConsensusQuote {
    Probability p_c;
    double odds = 1.0;  // decimal odds, 1 / p_c
    WeightRule rule = WeightRule::equal();
};

/// Margins are in multiples of the unit stake.
using MarginValue = double;

/// p_c = p_b (1 - w1) + p_s w1. DegenerateError when p_c = 0.
ConsensusQuote consensus(Probability p_b, Probability p_s, WeightRule rule);

/// (odds - 1) p_b - (1 - p_b): the buyer's expected margin under their own belief.
MarginValue buyer_subjective_margin(Probability p_b, const ConsensusQuote& quote);

/// (1 - p_s) - (odds - 1) p_s: the seller's expected margin under their own belief.
MarginValue seller_subjective_margin(Probability p_s, const ConsensusQuote& quote);

/// (1 - p_t) - p_t (1 / p_c - 1): the seller's expected margin at the true
/// frequency when the bet is struck at p_c. DegenerateError at p_c = 0.
MarginValue seller_objective_margin(Probability p_t, Probability p_c_effective);

/// Beneficial-minus-costly seller margin for a mispricing of size iota,
/// -2 iota p_t / (iota^2 - p_t^2). Non-negative on 0 <= iota < p_t.
/// DomainError unless 0 <= iota < p_t.
double asymmetry_delta(Probability p_t, double iota);

/// Beneficial-plus-costly seller margin, -2 iota^2 / (p_t^2 - iota^2).
/// Never positive: an unbiased mispricing costs the seller on net.
double net_asymmetry(Probability p_t, double iota);

/// Mean of the seller's objective margin over pairs (P_B, P_S) drawn from
/// the envelope of (p_t, epsilon), conditioned on the role rule P_S < P_B.
/// Requires 0 < epsilon <= 1, 0 < w1 < 1 and 0 < p_t < 1.
MarginValue conditional_mean_seller_margin(Probability p_t, double epsilon, WeightRule rule);

namespace detail {

/// Same closed form, continuous on the closed interval 0 <= w1 <= 1 (the
/// endpoints are the analytic limits). No argument validation.
double conditional_mean_seller_margin_limit(double p_t, double epsilon, double w1) noexcept;

}  // namespace detail

}  // namespace noisyodds
