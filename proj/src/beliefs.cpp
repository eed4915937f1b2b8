#include "noisyodds/beliefs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "noisyodds/errors.hpp"

namespace noisyodds {

namespace {

const double kLn10 = std::log(10.0);

void require_nondegenerate(const BeliefEnvelope& env)
{
    if (env.degenerate()) {
        throw DegenerateError("evidence distribution undefined for a zero-width envelope (L = H)");
    }
}

}  // namespace

Probability::Probability(double value) : value_(value)
{
    if (!(value >= 0.0 && value <= 1.0)) {
        throw DomainError("probability outside [0, 1]: " + std::to_string(value));
    }
}

double RhombusBounds::lower() const noexcept
{
    return std::max(right, bottom);
}

double RhombusBounds::upper() const noexcept
{
    return std::min(left, top);
}

Probability woe_to_probability(WeightOfEvidence w)
{
    if (!std::isfinite(w.bans)) {
        throw DomainError("weight of evidence must be finite");
    }
    // Symmetric form keeps relative precision in the lower tail.
    if (w.bans >= 0.0) {
        return Probability(1.0 / (std::pow(10.0, -w.bans) + 1.0));
    }
    const double t = std::pow(10.0, w.bans);
    return Probability(t / (1.0 + t));
}

WeightOfEvidence probability_to_woe(Probability p)
{
    const double v = p.value();
    if (v <= 0.0 || v >= 1.0) {
        throw DomainError("infinite weight of evidence at probability " + std::to_string(v));
    }
    return {-std::log((1.0 - v) / v) / kLn10};
}

RhombusBounds rhombus_bounds(double p_t, double epsilon) noexcept
{
    return {(1.0 + epsilon) * p_t, (1.0 - epsilon) * p_t + epsilon, (1.0 + epsilon) * p_t - epsilon,
            (1.0 - epsilon) * p_t};
}

BeliefEnvelope belief_envelope(Probability p_t, double epsilon)
{
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw DomainError("noise fraction epsilon outside [0, 1]: " + std::to_string(epsilon));
    }
    const double t = p_t.value();
    const double e = epsilon * std::min(1.0 - t, t);
    // Clamp guards the last ulp; the bounds are in [0, 1] mathematically.
    const double lo = std::clamp(t - e, 0.0, 1.0);
    const double hi = std::clamp(t + e, 0.0, 1.0);
    return {p_t, epsilon, e, Probability(lo), Probability(hi)};
}

Probability sample_belief(const BeliefEnvelope& env, double unit_uniform) noexcept
{
    const double lo = env.l.value();
    const double v = lo + (env.h.value() - lo) * unit_uniform;
    return Probability(std::min(v, env.h.value()));
}

Probability sample_belief(const BeliefEnvelope& env, rng::TrialStream& stream) noexcept
{
    return sample_belief(env, stream.uniform());
}

std::pair<double, double> woe_support(const BeliefEnvelope& env)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    const double lo = env.l.value() <= 0.0 ? -inf : probability_to_woe(env.l).bans;
    const double hi = env.h.value() >= 1.0 ? inf : probability_to_woe(env.h).bans;
    return {lo, hi};
}

double woe_cdf(WeightOfEvidence w, const BeliefEnvelope& env)
{
    require_nondegenerate(env);
    const double p = woe_to_probability(w).value();
    return std::clamp((p - env.l.value()) / env.width(), 0.0, 1.0);
}

double woe_pdf(WeightOfEvidence w, const BeliefEnvelope& env)
{
    require_nondegenerate(env);
    if (!std::isfinite(w.bans)) {
        throw DomainError("weight of evidence must be finite");
    }
    const double p = woe_to_probability(w).value();
    if (p < env.l.value() || p > env.h.value()) {
        return 0.0;
    }
    // 10^w ln10 / (10^w + 1)^2 written as p(1-p) ln10 so it never overflows.
    return p * (1.0 - p) * kLn10 / env.width();
}

}  // namespace noisyodds
