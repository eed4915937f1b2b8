#pragma once

#include <utility>

#include "noisyodds/rng.hpp"

namespace noisyodds {

/// A probability on the closed unit interval. Construction validates.
class Probability {
public:
    constexpr Probability() noexcept = default;
    /// Throws DomainError unless 0 <= value <= 1.
    explicit Probability(double value);

    constexpr double value() const noexcept { return value_; }
    constexpr Probability complement() const noexcept { return Probability(1.0 - value_, Unchecked{}); }

    friend constexpr bool operator==(Probability, Probability) noexcept = default;

private:
    struct Unchecked {};
    constexpr Probability(double value, Unchecked) noexcept : value_(value) {}

    double value_ = 0.0;
};

/// Weight of evidence in bans (log10 likelihood ratio).
struct WeightOfEvidence {
    double bans = 0.0;
};

/// Uniform noise envelope [L, H] around a true relative frequency p_t.
/// Half-width e = epsilon * min(p_t, 1 - p_t).
struct BeliefEnvelope {
    Probability p_t;
    double epsilon = 0.0;
    double e = 0.0;
    Probability l;
    Probability h;

    double width() const noexcept { return h.value() - l.value(); }
    bool degenerate() const noexcept { return !(l.value() < h.value()); }
};

/// The four edges of the (p_t, belief) rhombus traced out by the envelope as
/// p_t sweeps [0, 1]. lower() = max(right, bottom), upper() = min(left, top).
struct RhombusBounds {
    double left = 0.0;
    double top = 0.0;
    double right = 0.0;
    double bottom = 0.0;

    double lower() const noexcept;
    double upper() const noexcept;
};

/// Logistic map from evidence (bans) to probability: 1 / (10^-w + 1).
Probability woe_to_probability(WeightOfEvidence w);

/// Inverse of woe_to_probability. DomainError at p in {0, 1}.
WeightOfEvidence probability_to_woe(Probability p);

/// DomainError unless 0 <= epsilon <= 1.
BeliefEnvelope belief_envelope(Probability p_t, double epsilon);

RhombusBounds rhombus_bounds(double p_t, double epsilon) noexcept;

/// Map a U[0,1) variate onto the envelope.
Probability sample_belief(const BeliefEnvelope& env, double unit_uniform) noexcept;
Probability sample_belief(const BeliefEnvelope& env, rng::TrialStream& stream) noexcept;

/// Support of the gathered-evidence distribution in bans; the lower end is
/// -infinity when L = 0 and the upper end +infinity when H = 1.
std::pair<double, double> woe_support(const BeliefEnvelope& env);

/// CDF of gathered evidence implied by a uniform belief on [L, H].
/// DegenerateError when L = H.
double woe_cdf(WeightOfEvidence w, const BeliefEnvelope& env);

/// Density (per ban) of gathered evidence. DegenerateError when L = H.
double woe_pdf(WeightOfEvidence w, const BeliefEnvelope& env);

}  // namespace noisyodds
