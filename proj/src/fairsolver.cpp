#include "noisyodds/fairsolver.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "noisyodds/errors.hpp"
#include "noisyodds/quadrature.hpp"

namespace noisyodds {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kBracketMargin = 1e-9;
constexpr double kRootTolerance = 1e-12;

struct Tamper {
    bool active = false;
    Variant variant = Variant::BasicGame;
    Segment segment = Segment::I;
    double offset = 0.0;
};

Tamper g_tamper;

double tamper_offset(Variant variant, Segment segment) noexcept
{
    if (g_tamper.active && g_tamper.variant == variant && g_tamper.segment == segment) {
        return g_tamper.offset;
    }
    return 0.0;
}

void validate_epsilon(double epsilon)
{
    if (!(epsilon > 0.0 && epsilon <= 1.0)) {
        throw DomainError("requires 0 < epsilon <= 1, got " + std::to_string(epsilon));
    }
}

void validate_interior(Probability p_c)
{
    if (!(p_c.value() > 0.0 && p_c.value() < 1.0)) {
        throw DomainError("requires 0 < p_c < 1, got " + std::to_string(p_c.value()));
    }
}

void validate_shift(double p_c, double m)
{
    if (!(p_c + m > 0.0 && p_c + m < 1.0)) {
        throw DomainError("adjusted consensus p_c + m must lie strictly inside (0, 1)");
    }
}

// ln|x|: the real part of the logarithm, used where a printed argument is negative.
double real_log(double x) noexcept
{
    return std::log(std::fabs(x));
}

// Basic-game symbols. The printed "a" is read as epsilon, a bare "P" as P_C.
struct BasicSymbols {
    std::array<double, 18> x{};  // x[1] .. x[17]

    BasicSymbols(double c, double a, double m) noexcept
    {
        x[1] = std::log(a + 1.0);
        x[2] = std::log(1.0 - a);
        x[3] = std::log(1.0 - c);
        x[4] = std::log(1.0 / c);
        x[5] = std::log(1.0 / (c * c));
        x[6] = std::log((1.0 - c) / c);
        x[7] = std::log((-a - 1.0) / (-c - 1.0));
        x[8] = std::log((1.0 - c) / (1.0 - a));
        x[9] = std::log(c);
        x[10] = std::log(c * c * c * c);
        x[11] = std::log(2.0);
        x[12] = real_log((a + 1.0) * (-(1.0 - c)));
        x[13] = std::atanh(2.0 * c - 1.0);
        x[14] = 2.0 * x[1] - x[3] - x[9] - 2.0 * x[11] - 2.0;
        x[15] = 2.0 * x[3] + 2.0 * x[11] + x[14];
        x[16] = -x[3] - x[11] - x[14] - 2.0;
        x[17] = x[14] * (c + m) + x[11];
    }
};

struct DeFinettiSymbols {
    std::array<double, 9> x{};  // x[1] .. x[8]

    DeFinettiSymbols(double c, double e) noexcept
    {
        x[1] = std::log((1.0 - c) / (e + 1.0));
        x[2] = std::log((1.0 - c) / c);
        x[3] = std::log(c / (e + 1.0));
        x[4] = std::log((e + 1.0) / c);
        x[5] = std::log(2.0);
        x[6] = std::atanh(e);
        x[7] = -x[1] - x[3] - 2.0 * x[5];
        x[8] = 4.0 * x[5] - 4.0 * x[4];
    }
};

double printed_basic_margin(Segment s, double c, double e, double m) noexcept
{
    const BasicSymbols sym(c, e, m);
    const auto& x = sym.x;
    const double e2 = e * e;
    const double P = c;
    switch (s) {
    case Segment::I:
        return (((e + 2.0) * x[1] - (e - 2.0) * x[2]) * c + m * ((e + 1.0) * x[1] - (e - 1.0) * x[2])) / (e2 * (c + m));
    case Segment::II:
        return (e * (x[1] - x[2]) * (c + m - 1.0) + (x[1] + x[2]) * (2.0 * c + m - 2.0)) / (e2 * (c + m));
    case Segment::III:
        return 2.0 * m * ((e + 1.0) * x[1] - e) / (e2 * (c + m));
    case Segment::IV:
        return (2.0 * m * (x[3] * (-c) + x[9] * c + x[3]) + 2.0 * x[11] * (2.0 * c + m - 2.0) -
                P * (2.0 * x[6] * c - 5.0 * x[3] + x[9]) - 3.0 * x[3] + x[5] / 2.0) /
               (e2 * (m + P));
    case Segment::V:
        return (c * (-2.0 * c - 3.0 * x[3] + 3.0 * x[11] + 1.0) - m * (2.0 * c + 2.0 * x[3] - 2.0 * x[11] + 1.0) +
                3.0 * x[3]) /
               (c + m);
    case Segment::VI:
        return (m * (2.0 * c + 2.0 * x[4] + 2.0 * x[11] - 3.0) + c * (2.0 * c + 3.0 * x[4] + 3.0 * x[11] - 3.0) -
                3.0 * x[11] + 1.0) /
               (c + m);
    case Segment::VII:
        return (e * (-x[7] + x[17] + 1.0) + 4.0 * c * (c + m + x[1] - x[13] - 1.0) + m * x[15] - 2.0 * x[11] -
                2.0 * x[12] + 1.0) /
               (e2 * (c + m));
    case Segment::VIII:
        return (2.0 * m * x[16] * c + x[1] * (2.0 * m * (c + 1.0) + c * (5.0 - 2.0 * c)) +
                0.5 * (x[10] + 4.0 * x[11]) * c * c + x[16] * c) /
               (e2 * (c + m));
    case Segment::IX:
        return (e * (x[8] + x[17] + 1.0) + 4.0 * c * (-c - m + x[1] + x[13] + 1.0) + 4.0 * m * x[1] - m * x[15] +
                2.0 * x[8] + 2.0 * x[11] - 1.0) /
               (e2 * (c + m));
    case Segment::Otherwise:
        break;
    }
    return kNaN;
}

double printed_basic_adjustment(Segment s, double c, double e) noexcept
{
    const BasicSymbols sym(c, e, 0.0);
    const auto& x = sym.x;
    switch (s) {
    case Segment::I:
        return ((e - 2.0) * x[2] - (e + 2.0) * x[1]) * c / ((e + 1.0) * x[1] - (e - 1.0) * x[2]);
    case Segment::II:
        return ((e - 2.0) * x[2] - (e + 2.0) * x[1]) * (c - 1.0) / ((e + 1.0) * x[1] - (e - 1.0) * x[2]);
    case Segment::III:
        return 0.0;
    case Segment::IV:
        return (c * (-4.0 * x[6] * c + 10.0 * x[3] - 2.0 * x[9]) + 8.0 * x[11] * (c - 1.0) - 6.0 * x[3] + x[5]) /
               (8.0 * x[13] * c + 4.0 * x[3] + 4.0 * x[11]);
    case Segment::V:
        return (c * (-2.0 * c - 3.0 * x[3] + 3.0 * x[11] + 1.0) + 3.0 * x[3]) / (2.0 * c + 2.0 * x[3] - 2.0 * x[11] + 1.0);
    case Segment::VI:
        return (c * (-2.0 * c - 3.0 * x[4] - 3.0 * x[11] + 3.0) + 3.0 * x[11] - 1.0) /
               (2.0 * c + 2.0 * x[4] + 2.0 * x[11] - 3.0);
    case Segment::VII:
        return (e * (x[7] - x[11] - 1.0) + (-2.0 * x[1] + 2.0 * x[13] + 2.0) * c + 2.0 * x[11] + 2.0 * x[12] - 1.0) /
                   (e * (2.0 * x[1] - x[3] - x[9] - 2.0 * x[11] - 2.0) + 4.0 * c + 2.0 * x[1] - 2.0 * x[13] - 2.0) -
               c;
    case Segment::VIII:
        return c * (x[1] * (6.0 - 4.0 * c) + (x[10] + 4.0 * x[11]) * c + 2.0 * (x[9] + x[11])) /
               (4.0 * x[1] * (c - 1.0) - 4.0 * (x[9] + x[11]) * c);
    case Segment::IX:
        return (e * (x[8] + x[11] + 1.0) + (2.0 * x[1] + 2.0 * x[13] + 2.0) * c + 2.0 * x[8] + 2.0 * x[11] - 1.0) /
                   (e * (-2.0 * x[1] + x[3] + x[9] + 2.0 * x[11] + 2.0) + 4.0 * c - 2.0 * x[1] - 2.0 * x[13] - 2.0) -
               c;
    case Segment::Otherwise:
        break;
    }
    return kNaN;
}

double printed_definetti_margin(Segment s, double c, double e, double m) noexcept
{
    const DeFinettiSymbols sym(c, e);
    const auto& x = sym.x;
    switch (s) {
    case Segment::I:
        return (c / (e * e - 1.0)) / (m + c) + x[6] / e;
    case Segment::II:
        return ((c - 1.0) / (e * e - 1.0) + x[6] * (m + c - 1.0) / e) / (m + c);
    case Segment::III:
        return (2.0 * c * x[2] * (-m - c + 1.0) + 2.0 * c - 1.0) / (4.0 * e * c * (m + c));
    case Segment::IV:
        return ((e + 1.0) * x[7] * (m + c) + (e + 1.0) * x[1] + (e + 1.0) * x[5] + 2.0 * c - 1.0) /
               (2.0 * e * (e + 1.0) * (m + c));
    case Segment::V:
        return (-e + (c - 1.0) * x[8] * (m + c) + 2.0 * c - 1.0) / (4.0 * e * (e + 1.0) * (m + c));
    default:
        return 0.0;
    }
}

double printed_definetti_adjustment(Segment s, double c, double e) noexcept
{
    const DeFinettiSymbols sym(c, e);
    const auto& x = sym.x;
    switch (s) {
    case Segment::I:
        return c * ((e * e - 1.0) * x[6] + e) / ((1.0 - e * e) * x[6]);
    case Segment::II:
        return (c - 1.0) * ((e * e - 1.0) * x[6] + e) / ((1.0 - e * e) * x[6]);
    case Segment::III:
        return (2.0 * c - 1.0) / (2.0 * c * x[2]) - c + 1.0;
    case Segment::IV:
        return -(c * ((e + 1.0) * x[7] + 2.0) + (e + 1.0) * x[1] + (e + 1.0) * x[5] - 1.0) / ((e + 1.0) * x[7]);
    case Segment::V:
        return (e - 2.0 * c + 1.0) / ((c - 1.0) * x[8]) - c;
    default:
        return 0.0;
    }
}

// toms748 on a bracket whose ends straddle zero. NoRootError otherwise.
template <class F>
double bracketed_root(F f, double lo, double hi, double f_lo, double f_hi)
{
    if (f_lo == 0.0) {
        return lo;
    }
    if (f_hi == 0.0) {
        return hi;
    }
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        throw NoRootError("no sign change on the bracket [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    std::uintmax_t iterations = 200;
    const auto tolerance = [](double a, double b) { return std::fabs(b - a) <= kRootTolerance; };
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tolerance, iterations);
    return 0.5 * (a + b);
}

PiecewiseEvaluation evaluate(Variant variant, Probability p_c, double epsilon, double m)
{
    validate_epsilon(epsilon);
    const double c = p_c.value();
    const Segment segment = region(variant, c, epsilon);
    validate_shift(c, m);

    PiecewiseEvaluation out;
    out.variant = variant;
    out.segment_id = segment;
    const KernelMoments moments = kernel_moments(variant, c, epsilon);
    out.normalizer = moments.mass;
    out.printed_value = printed_mean_margin(variant, segment, c, epsilon, m);
    out.printed_trusted = printed_margin_trusted(variant, segment);
    out.weighted_value = out.printed_trusted ? out.printed_value : moments.mass - moments.first / (c + m);
    out.weighted_value += tamper_offset(variant, segment);
    out.value = out.weighted_value / moments.mass;
    out.substitutions = variant == Variant::BasicGame ? basicgame_substitutions(c, epsilon, m)
                                                      : definetti_substitutions(c, epsilon);
    return out;
}

}  // namespace

std::string_view to_string(Segment s) noexcept
{
    constexpr std::array<std::string_view, 10> names{"i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "otherwise"};
    return names[static_cast<std::size_t>(s)];
}

std::optional<Segment> parse_segment(std::string_view name) noexcept
{
    for (int i = 0; i <= static_cast<int>(Segment::Otherwise); ++i) {
        const auto s = static_cast<Segment>(i);
        if (to_string(s) == name) {
            return s;
        }
    }
    return std::nullopt;
}

Segment basicgame_region(double c, double e)
{
    if (e + 1.0 >= 2.0 * c && 0.0 < c && c <= 0.5 &&
        ((0.0 < e && e < 0.5 && 2.0 * c + e <= 1.0) || (0.5 <= e && e < 1.0 && 2.0 * c + e < 1.0))) {
        return Segment::I;
    }
    if (0.5 < c && c < 1.0 && e + 1.0 < 2.0 * c &&
        ((2.0 * c + e > 1.0 && e > 0.0) || (2.0 * c + e >= 1.0 && 2.0 * e >= 1.0))) {
        return Segment::II;
    }
    if (2.0 * c == 1.0 && e < 1.0 && e > 0.0) {
        return Segment::III;
    }
    if (e + 1.0 == 2.0 * c && 0.5 < c && c < 1.0 && e < 1.0) {
        return Segment::IV;
    }
    if (e == 1.0 && 0.0 < c && c <= 0.5) {
        return Segment::V;
    }
    if (e == 1.0 && 2.0 * c > 1.0 && c < 1.0) {
        return Segment::VI;
    }
    if (e + 1.0 > 2.0 * c && 2.0 * c > 1.0 && e < 1.0) {
        return Segment::VII;
    }
    if (0.5 <= e && e < 1.0 && 0.0 < c && c < 0.5 && 2.0 * c + e == 1.0) {
        return Segment::VIII;
    }
    if (e < 1.0 && 2.0 * c < 1.0 && 2.0 * c + e > 1.0) {
        return Segment::IX;
    }
    throw NoRegionError("no printed condition holds for p_c = " + std::to_string(c) +
                        ", epsilon = " + std::to_string(e));
}

Segment definetti_region(double c, double e) noexcept
{
    if (e + 1.0 >= 2.0 * c &&
        ((0.0 < e && e < 1.0 / 3.0 && (2.0 * c + e == 1.0 || (c > 0.0 && 2.0 * c + e <= 1.0))) ||
         (c > 0.0 && 3.0 * e >= 1.0 && 2.0 * c + e < 1.0))) {
        return Segment::I;
    }
    if (e + 1.0 < 2.0 * c && c < 1.0 &&
        ((2.0 * c + e > 1.0 && e > 0.0) || (2.0 * c + e >= 1.0 && 3.0 * e >= 1.0))) {
        return Segment::II;
    }
    if (2.0 * c + e > 1.0 && e < 1.0 && e + 1.0 == 2.0 * c) {
        return Segment::III;
    }
    if (e < 1.0 && e + 1.0 > 2.0 * c && 2.0 * c + e > 1.0) {
        return Segment::IV;
    }
    if (1.0 / 3.0 <= e && e < 1.0 && e + 1.0 > 2.0 * c && 2.0 * c + e == 1.0) {
        return Segment::V;
    }
    return Segment::Otherwise;
}

Segment region(Variant variant, double p_c, double epsilon)
{
    return variant == Variant::BasicGame ? basicgame_region(p_c, epsilon) : definetti_region(p_c, epsilon);
}

SubstitutionTable basicgame_substitutions(double p_c, double epsilon, double m)
{
    const BasicSymbols sym(p_c, epsilon, m);
    SubstitutionTable table{{"a", epsilon}, {"P_C", p_c}, {"m", m}};
    for (int i = 1; i <= 17; ++i) {
        table.emplace_back("x" + std::to_string(i), sym.x[static_cast<std::size_t>(i)]);
    }
    return table;
}

SubstitutionTable definetti_substitutions(double p_c, double epsilon)
{
    const DeFinettiSymbols sym(p_c, epsilon);
    SubstitutionTable table{{"epsilon", epsilon}, {"P_C", p_c}};
    for (int i = 1; i <= 8; ++i) {
        table.emplace_back("x" + std::to_string(i), sym.x[static_cast<std::size_t>(i)]);
    }
    return table;
}

double printed_mean_margin(Variant variant, Segment segment, double p_c, double epsilon, double m)
{
    return variant == Variant::BasicGame ? printed_basic_margin(segment, p_c, epsilon, m)
                                         : printed_definetti_margin(segment, p_c, epsilon, m);
}

double printed_adjustment(Variant variant, Segment segment, double p_c, double epsilon)
{
    return variant == Variant::BasicGame ? printed_basic_adjustment(segment, p_c, epsilon)
                                         : printed_definetti_adjustment(segment, p_c, epsilon);
}

bool printed_margin_trusted(Variant variant, Segment segment) noexcept
{
    if (variant == Variant::DeFinetti) {
        return segment != Segment::Otherwise;
    }
    switch (segment) {
    case Segment::I:
    case Segment::II:
    case Segment::III:
    case Segment::IV:
    case Segment::VIII:
        return true;
    default:
        return false;
    }
}

PiecewiseEvaluation basicgame_mean_margin(Probability p_c, double epsilon, double m)
{
    return evaluate(Variant::BasicGame, p_c, epsilon, m);
}

PiecewiseEvaluation definetti_mean_margin(Probability p_c, double epsilon, double m)
{
    return evaluate(Variant::DeFinetti, p_c, epsilon, m);
}

PiecewiseEvaluation mean_margin(Variant variant, Probability p_c, double epsilon, double m)
{
    return evaluate(variant, p_c, epsilon, m);
}

KernelMoments quadrature_kernel_moments(Variant variant, double p_c, double epsilon)
{
    validate_epsilon(epsilon);
    if (!(p_c > 0.0 && p_c < 1.0)) {
        throw DegenerateError("posterior of p_t is a point mass when p_c is 0 or 1");
    }
    const auto kernel = [&](double t) {
        return variant == Variant::BasicGame ? pt_kernel_given_pc(t, p_c, epsilon)
                                             : definetti_pt_kernel(t, p_c, epsilon);
    };
    const auto [lo, hi] = posterior_support(p_c, epsilon);
    const std::array<double, 2> inner{p_c, 0.5};
    return {integrate(kernel, lo, hi, inner), integrate([&](double t) { return t * kernel(t); }, lo, hi, inner)};
}

double quadrature_mean_margin(Probability p_c, double epsilon, double m, Variant variant)
{
    validate_epsilon(epsilon);
    const double c = p_c.value();
    if (!(c > 0.0 && c < 1.0)) {
        throw DegenerateError("posterior of p_t is a point mass when p_c is 0 or 1");
    }
    validate_shift(c, m);
    const double inverse = 1.0 / (c + m) - 1.0;
    const auto kernel = [&](double t) {
        return variant == Variant::BasicGame ? pt_kernel_given_pc(t, c, epsilon) : definetti_pt_kernel(t, c, epsilon);
    };
    const auto [lo, hi] = posterior_support(c, epsilon);
    const std::array<double, 2> inner{c, 0.5};
    const double mass = integrate(kernel, lo, hi, inner);
    const double weighted = integrate([&](double t) { return ((1.0 - t) - t * inverse) * kernel(t); }, lo, hi, inner);
    return weighted / mass;
}

std::string_view to_string(AdjustmentSource s) noexcept
{
    switch (s) {
    case AdjustmentSource::PrintedClosedForm:
        return "printed";
    case AdjustmentSource::AnalyticClosedForm:
        return "analytic";
    case AdjustmentSource::RootFinder:
        return "root-finder";
    }
    return "unknown";
}

double fair_adjustment_fast(Variant variant, double p_c, double epsilon)
{
    const KernelMoments k = kernel_moments(variant, p_c, epsilon);
    return k.first / k.mass - p_c;
}

Adjustment solve_adjustment(Variant variant, Probability p_c, double epsilon)
{
    validate_epsilon(epsilon);
    validate_interior(p_c);
    const double c = p_c.value();
    const auto oracle = [&](double m) { return quadrature_mean_margin(p_c, epsilon, m, variant); };

    Adjustment out;
    out.p_c = p_c;
    out.epsilon = epsilon;
    out.variant = variant;
    out.segment = region(variant, c, epsilon);

    const std::pair<AdjustmentSource, double> candidates[] = {
        {AdjustmentSource::PrintedClosedForm, printed_adjustment(variant, out.segment, c, epsilon)},
        {AdjustmentSource::AnalyticClosedForm, fair_adjustment_fast(variant, c, epsilon)},
    };
    for (const auto& [source, m] : candidates) {
        if (!std::isfinite(m) || !(c + m > 0.0 && c + m < 1.0)) {
            continue;
        }
        const double residual = std::fabs(oracle(m));
        if (residual < kPlugBackTolerance) {
            out.m = m;
            out.source = source;
            out.residual = residual;
            return out;
        }
    }

    const double lo = -c + kBracketMargin;
    const double hi = 1.0 - c - kBracketMargin;
    out.m = bracketed_root(oracle, lo, hi, oracle(lo), oracle(hi));
    out.source = AdjustmentSource::RootFinder;
    out.residual = std::fabs(oracle(out.m));
    return out;
}

Adjustment solve_fair_adjustment(Probability p_c, double epsilon)
{
    return solve_adjustment(Variant::BasicGame, p_c, epsilon);
}

Adjustment solve_definetti_adjustment(Probability p_c, double epsilon)
{
    return solve_adjustment(Variant::DeFinetti, p_c, epsilon);
}

WeightSolution solve_w1_star(Probability p_t, double epsilon)
{
    const double t = p_t.value();
    if (!(t > 0.0 && t < 1.0)) {
        throw DomainError("w1* requires 0 < p_t < 1");
    }
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw DomainError("w1* requires 0 <= epsilon <= 1");
    }
    if (epsilon == 0.0) {
        return {0.5, true, 0.0};
    }
    const auto f = [&](double w1) { return detail::conditional_mean_seller_margin_limit(t, epsilon, w1); };
    const double f0 = f(0.0);
    const double f1 = f(1.0);
    if (std::fabs(f0) <= kRootTolerance) {
        return {0.0, false, std::fabs(f0)};
    }
    if (std::fabs(f1) <= kRootTolerance) {
        return {1.0, false, std::fabs(f1)};
    }
    double lo = 0.0;
    double hi = 1.0;
    double f_lo = f0;
    double f_hi = f1;
    if (std::signbit(f0) == std::signbit(f1)) {
        // Look for an interior sign change on [delta, 1 - delta].
        constexpr int kSteps = 200;
        constexpr double kDelta = 1e-6;
        bool found = false;
        double prev_w = kDelta;
        double prev_f = f(prev_w);
        for (int i = 1; i <= kSteps && !found; ++i) {
            const double w = kDelta + (1.0 - 2.0 * kDelta) * i / kSteps;
            const double fw = f(w);
            if (std::signbit(fw) != std::signbit(prev_f)) {
                lo = prev_w;
                hi = w;
                f_lo = prev_f;
                f_hi = fw;
                found = true;
            }
            prev_w = w;
            prev_f = fw;
        }
        if (!found) {
            throw NoRootError("conditional mean seller margin keeps one sign over w1 in [0, 1]");
        }
    }
    const double w1 = bracketed_root(f, lo, hi, f_lo, f_hi);
    return {w1, false, std::fabs(f(w1))};
}

namespace testing_hooks {

void tamper_segment(Variant variant, Segment segment, double offset) noexcept
{
    g_tamper = {true, variant, segment, offset};
}

void clear_tamper() noexcept
{
    g_tamper = {};
}

}  // namespace testing_hooks

}  // namespace noisyodds
