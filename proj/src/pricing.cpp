#include "noisyodds/pricing.hpp"

#include <cmath>
#include <string>

#include "noisyodds/errors.hpp"

namespace noisyodds {

namespace {

/// log1p(w x) / w, continuous at w = 0.
double scaled_log1p(double x, double w) noexcept
{
    return w == 0.0 ? x : std::log1p(w * x) / w;
}

// Symbols shared by both halves of the closed form.
struct MarginSymbols {
    double c;  // -p_t (1 - eps)
    double d;  // -p_t (1 + eps)
    double g;  // 2 p_t eps
};

MarginSymbols symbols(double p_t, double eps) noexcept
{
    return {-p_t * (1.0 - eps), -p_t * (1.0 + eps), 2.0 * p_t * eps};
}

// 0 <= p_t < 1/2.
//   1 + [c ln(c / (d + g w1)) / (1 - w1) + d ln(d / (d + g w1)) / w1] / (g eps)
// Since d = c - g, both log ratios are log1p of an exact small quantity.
double margin_below_chance(double p_t, double eps, double w1) noexcept
{
    const auto [c, d, g] = symbols(p_t, eps);
    const double seller_term = c == 0.0 ? 0.0 : -c * scaled_log1p(-g / c, 1.0 - w1);
    const double buyer_term = -d * scaled_log1p(g / d, w1);
    return 1.0 + (seller_term + buyer_term) / (g * eps);
}

// 1/2 <= p_t <= 1. With h = w1 (g - 2 eps) + eps - c:
//   1 + [(d + eps) ln(-(d + eps) / h) / (1 - w1) - (eps - c) ln((eps - c) / h) / w1]
//       / (g eps (-4 eps / g + 1 / p_t^2 + 1))
// -(d + eps) and eps - c are the envelope ends L and H, and h = H - w1 (H - L).
double margin_above_chance(double p_t, double eps, double w1) noexcept
{
    const auto [c, d, g] = symbols(p_t, eps);
    const double lower = -(d + eps);
    const double upper = eps - c;
    const double spread = 2.0 * eps * (1.0 - p_t);  // 2 eps - g, without the cancellation
    const double seller_term = lower <= 0.0 ? 0.0 : lower * scaled_log1p(spread / lower, 1.0 - w1);
    const double buyer_term = upper * scaled_log1p(-spread / upper, w1);
    // -4 eps / g + 1 / p_t^2 + 1 == ((1 - p_t) / p_t)^2 exactly.
    const double ratio = (1.0 - p_t) / p_t;
    return 1.0 + (seller_term + buyer_term) / (g * eps * ratio * ratio);
}

}  // namespace

WeightRule::WeightRule(double w1) : w1_(w1)
{
    if (!(w1 >= 0.0 && w1 <= 1.0)) {
        throw DomainError("weight w1 outside [0, 1]: " + std::to_string(w1));
    }
}

ConsensusQuote consensus(Probability p_b, Probability p_s, WeightRule rule)
{
    const double w1 = rule.w1();
    const double p_c = p_b.value() * (1.0 - w1) + p_s.value() * w1;
    if (!(p_c > 0.0)) {
        throw DegenerateError("consensus probability is zero; odds undefined");
    }
    return {Probability(std::fmin(p_c, 1.0)), 1.0 / p_c, rule};
}

MarginValue buyer_subjective_margin(Probability p_b, const ConsensusQuote& quote)
{
    const double b = p_b.value();
    return (quote.odds - 1.0) * b - (1.0 - b);
}

MarginValue seller_subjective_margin(Probability p_s, const ConsensusQuote& quote)
{
    const double s = p_s.value();
    return (1.0 - s) - (quote.odds - 1.0) * s;
}

MarginValue seller_objective_margin(Probability p_t, Probability p_c_effective)
{
    const double pc = p_c_effective.value();
    if (!(pc > 0.0)) {
        throw DegenerateError("effective consensus probability is zero; odds undefined");
    }
    const double t = p_t.value();
    return (1.0 - t) - t * (1.0 / pc - 1.0);
}

double asymmetry_delta(Probability p_t, double iota)
{
    const double t = p_t.value();
    if (!(iota >= 0.0 && iota < t)) {
        throw DomainError("asymmetry requires 0 <= iota < p_t (pole at iota = p_t)");
    }
    return -2.0 * iota * t / (iota * iota - t * t);
}

double net_asymmetry(Probability p_t, double iota)
{
    const double t = p_t.value();
    if (!(iota >= 0.0 && iota < t)) {
        throw DomainError("asymmetry requires 0 <= iota < p_t (pole at iota = p_t)");
    }
    return -2.0 * iota * iota / (t * t - iota * iota);
}

MarginValue conditional_mean_seller_margin(Probability p_t, double epsilon, WeightRule rule)
{
    const double t = p_t.value();
    const double w1 = rule.w1();
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw DomainError("conditional mean margin requires 0 < epsilon <= 1");
    }
    if (!(w1 > 0.0 && w1 < 1.0)) {
        throw DomainError("closed form is singular at w1 in {0, 1}");
    }
    if (!(t > 0.0 && t < 1.0)) {
        throw DomainError("conditional mean margin requires 0 < p_t < 1");
    }
    return detail::conditional_mean_seller_margin_limit(t, epsilon, w1);
}

namespace detail {

double conditional_mean_seller_margin_limit(double p_t, double epsilon, double w1) noexcept
{
    return p_t < 0.5 ? margin_below_chance(p_t, epsilon, w1) : margin_above_chance(p_t, epsilon, w1);
}

}  // namespace detail

}  // namespace noisyodds
