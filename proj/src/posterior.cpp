#include "noisyodds/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "noisyodds/errors.hpp"

namespace noisyodds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (eps - c) / (eps - 1) and -c / (eps - 1) run off to -inf and +inf as eps
// reaches 1, but IEEE division by the signed zero would get the first sign wrong.
double lower_reflected(double c, double eps) noexcept
{
    return eps < 1.0 ? (eps - c) / (eps - 1.0) : -kInf;
}

double upper_direct(double c, double eps) noexcept
{
    return eps < 1.0 ? -c / (eps - 1.0) : kInf;
}

void validate(Probability p_c, double epsilon)
{
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw DomainError("posterior requires 0 < epsilon <= 1, got " + std::to_string(epsilon));
    }
    const double c = p_c.value();
    if (c <= 0.0 || c >= 1.0) {
        throw DegenerateError("posterior of p_t is a point mass when p_c is 0 or 1");
    }
}

// A kernel piece (alpha + beta t) / t^2, or (alpha + beta t) / (1 - t)^2 when
// reflected, integrated over [lo, hi] against 1 and t.
struct RationalPiece {
    double alpha;
    double beta;
    bool reflected;
    double lo;
    double hi;
};

KernelMoments integrate_piece(const RationalPiece& p) noexcept
{
    if (!(p.lo < p.hi)) {
        return {};
    }
    const double width = p.hi - p.lo;
    if (!p.reflected) {
        const double log_ratio = std::log1p(width / p.lo);
        const double inv_diff = width / (p.lo * p.hi);
        return {p.alpha * inv_diff + p.beta * log_ratio, p.alpha * log_ratio + p.beta * width};
    }
    const double u_lo = 1.0 - p.lo;
    const double u_hi = 1.0 - p.hi;
    const double log_ratio = std::log1p(-width / u_lo);  // ln(u_hi / u_lo)
    const double inv_diff = width / (u_lo * u_hi);       // 1/u_hi - 1/u_lo
    const double ab = p.alpha + p.beta;
    return {ab * inv_diff + p.beta * log_ratio, ab * inv_diff + (p.alpha + 2.0 * p.beta) * log_ratio + p.beta * width};
}

KernelMoments basic_game_moments(double c, double eps) noexcept
{
    const RationalPiece pieces[] = {
        {-c, 1.0 + eps, false, c / (1.0 + eps), std::min(c, 0.5)},
        {c, eps - 1.0, false, c, std::min(upper_direct(c, eps), 0.5)},
        {eps - c, 1.0 - eps, true, std::max(lower_reflected(c, eps), 0.5), c},
        {c + eps, -(1.0 + eps), true, std::max(c, 0.5), (c + eps) / (1.0 + eps)},
    };
    KernelMoments total;
    for (const auto& piece : pieces) {
        const auto part = integrate_piece(piece);
        total.mass += part.mass;
        total.first += part.first;
    }
    const double e2 = eps * eps;
    return {total.mass / e2, total.first / e2};
}

KernelMoments definetti_moments(double c, double eps) noexcept
{
    const auto [lo, hi] = posterior_support(c, eps);
    KernelMoments total;
    if (const double top = std::min(hi, 0.5); lo < top) {
        const double width = top - lo;
        total.mass += std::log1p(width / lo);
        total.first += width;
    }
    if (const double bottom = std::max(lo, 0.5); bottom < hi) {
        const double width = hi - bottom;
        const double log_ratio = -std::log1p(-width / (1.0 - bottom));  // ln((1 - bottom) / (1 - hi))
        total.mass += log_ratio;
        total.first += log_ratio - width;
    }
    return {total.mass / (2.0 * eps), total.first / (2.0 * eps)};
}

}  // namespace

std::string_view to_string(Variant v) noexcept
{
    return v == Variant::BasicGame ? "basic" : "definetti";
}

Variant parse_variant(std::string_view name)
{
    if (name == "basic" || name == "basicgame") {
        return Variant::BasicGame;
    }
    if (name == "definetti") {
        return Variant::DeFinetti;
    }
    throw ConfigError("unknown variant '" + std::string(name) + "' (expected basic or definetti)");
}

double consensus_density(Probability p_c_value, const BeliefEnvelope& env)
{
    if (env.degenerate()) {
        throw DegenerateError("consensus density undefined for a zero-width envelope (L = H)");
    }
    const double a = env.l.value();
    const double b = env.h.value();
    const double x = p_c_value.value();
    const double span2 = (b - a) * (b - a);
    if (a + b < 2.0 * x && b >= x) {
        return 4.0 * (b - x) / span2;
    }
    if (a <= x && a + b >= 2.0 * x) {
        return -4.0 * (a - x) / span2;
    }
    return 0.0;
}

double pt_kernel_given_pc(double t, double c, double eps) noexcept
{
    const double e2 = eps * eps;
    if (2.0 * eps * t < eps) {
        if (c <= t && t <= upper_direct(c, eps)) {
            return ((eps - 1.0) * t + c) / (e2 * t * t);
        }
        if (c / (eps + 1.0) <= t && t <= c) {
            return ((eps + 1.0) * t - c) / (e2 * t * t);
        }
        return 0.0;
    }
    const double s = (t - 1.0) * (t - 1.0);
    if (c <= t && t <= (c + eps) / (eps + 1.0)) {
        return (eps - (eps + 1.0) * t + c) / (e2 * s);
    }
    if (lower_reflected(c, eps) <= t && t <= c) {
        return (eps + (1.0 - eps) * t - c) / (e2 * s);
    }
    return 0.0;
}

double definetti_pt_kernel(double t, double c, double eps) noexcept
{
    const double lo = std::max(lower_reflected(c, eps), c / (eps + 1.0));
    const double hi = std::min(upper_direct(c, eps), (c + eps) / (eps + 1.0));
    if (t - lo >= 0.0 && t - hi <= 0.0) {
        if (2.0 * eps * t - eps >= 0.0) {
            return 1.0 / (2.0 * eps * (1.0 - t));
        }
        return 1.0 / (2.0 * eps * t);
    }
    return 0.0;
}

std::pair<double, double> posterior_support(double c, double eps) noexcept
{
    return {std::max(lower_reflected(c, eps), c / (1.0 + eps)), std::min(upper_direct(c, eps), (c + eps) / (1.0 + eps))};
}

KernelMoments kernel_moments(Variant variant, double p_c, double epsilon)
{
    validate(Probability(p_c), epsilon);
    return variant == Variant::BasicGame ? basic_game_moments(p_c, epsilon) : definetti_moments(p_c, epsilon);
}

double pt_density_given_pc(Probability p_t_value, Probability p_c, double epsilon)
{
    return PosteriorDensity(p_c, epsilon, Variant::BasicGame)(p_t_value.value());
}

double definetti_pt_density(Probability p_t_value, Probability p_c, double epsilon)
{
    return PosteriorDensity(p_c, epsilon, Variant::DeFinetti)(p_t_value.value());
}

PosteriorDensity::PosteriorDensity(Probability p_c, double epsilon, Variant variant)
    : p_c_(p_c), epsilon_(epsilon), variant_(variant)
{
    validate(p_c, epsilon);
    std::tie(lo_, hi_) = posterior_support(p_c.value(), epsilon);
    moments_ = kernel_moments(variant, p_c.value(), epsilon);
}

double PosteriorDensity::kernel(double p_t) const noexcept
{
    const double c = p_c_.value();
    return variant_ == Variant::BasicGame ? pt_kernel_given_pc(p_t, c, epsilon_)
                                          : definetti_pt_kernel(p_t, c, epsilon_);
}

double PosteriorDensity::operator()(double p_t) const noexcept
{
    return kernel(p_t) / moments_.mass;
}

std::vector<double> PosteriorDensity::breakpoints() const
{
    std::vector<double> points{lo_, hi_};
    for (double x : {p_c_.value(), 0.5}) {
        if (x > lo_ && x < hi_) {
            points.push_back(x);
        }
    }
    std::sort(points.begin(), points.end());
    return points;
}

}  // namespace noisyodds
