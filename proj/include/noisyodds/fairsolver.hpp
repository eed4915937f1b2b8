#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "noisyodds/beliefs.hpp"
#include "noisyodds/posterior.hpp"
#include "noisyodds/pricing.hpp"

namespace noisyodds {

/// Piece of a printed mean-margin system. The basic game uses I..IX, the
/// subject-weighted game I..V plus its catch-all Otherwise.
enum class Segment { I, II, III, IV, V, VI, VII, VIII, IX, Otherwise };

std::string_view to_string(Segment s) noexcept;
/// "i".."ix" or "otherwise"; nullopt for anything else.
std::optional<Segment> parse_segment(std::string_view name) noexcept;

/// First printed condition that holds for (p_c, epsilon), in printed order.
/// NoRegionError when none does.
Segment basicgame_region(double p_c, double epsilon);
/// Never throws: falls through to Segment::Otherwise.
Segment definetti_region(double p_c, double epsilon) noexcept;
Segment region(Variant variant, double p_c, double epsilon);

/// Named intermediate symbols in printed order.
using SubstitutionTable = std::vector<std::pair<std::string, double>>;

SubstitutionTable basicgame_substitutions(double p_c, double epsilon, double m);
SubstitutionTable definetti_substitutions(double p_c, double epsilon);

/// The printed segment expression, taken literally (kernel-weighted scale).
/// Logs of negative quantities use the real part ln|x|. May be non-finite.
double printed_mean_margin(Variant variant, Segment segment, double p_c, double epsilon, double m);

/// The printed closed-form m of a segment, taken literally.
double printed_adjustment(Variant variant, Segment segment, double p_c, double epsilon);

/// True for segments whose printed mean margin agrees with the quadrature
/// oracle; the others are evaluated from kernel antiderivatives instead.
bool printed_margin_trusted(Variant variant, Segment segment) noexcept;

struct PiecewiseEvaluation {
    Variant variant = Variant::BasicGame;
    Segment segment_id = Segment::I;
    /// Seller's mean objective margin given p_c (posterior expectation).
    double value = 0.0;
    /// value times the kernel mass: the scale on which the printed system is written.
    double weighted_value = 0.0;
    /// Literal printed segment; equals weighted_value when printed_trusted.
    double printed_value = 0.0;
    bool printed_trusted = false;
    double normalizer = 0.0;
    SubstitutionTable substitutions;
};

/// Requires 0 < epsilon <= 1 (DomainError), a matching region (NoRegionError)
/// and 0 < p_c + m < 1 (DomainError).
PiecewiseEvaluation basicgame_mean_margin(Probability p_c, double epsilon, double m);
PiecewiseEvaluation definetti_mean_margin(Probability p_c, double epsilon, double m);
PiecewiseEvaluation mean_margin(Variant variant, Probability p_c, double epsilon, double m);

/// Oracle: adaptive quadrature of the seller's objective margin at p_c + m
/// against the literal kernel, divided by the quadrature of the kernel.
double quadrature_mean_margin(Probability p_c, double epsilon, double m, Variant variant);

/// Oracle moments of the literal kernel (mass and first moment).
KernelMoments quadrature_kernel_moments(Variant variant, double p_c, double epsilon);

enum class AdjustmentSource { PrintedClosedForm, AnalyticClosedForm, RootFinder };
std::string_view to_string(AdjustmentSource s) noexcept;

struct Adjustment {
    Probability p_c;
    double epsilon = 0.0;
    double m = 0.0;
    Variant variant = Variant::BasicGame;
    Segment segment = Segment::I;
    AdjustmentSource source = AdjustmentSource::PrintedClosedForm;
    /// |quadrature_mean_margin| at the returned m.
    double residual = 0.0;

    double fair_probability() const noexcept { return p_c.value() + m; }
    double fair_odds() const noexcept { return 1.0 / (p_c.value() + m); }
};

/// Plug-back tolerance an adjustment must meet.
inline constexpr double kPlugBackTolerance = 1e-10;

/// Tries the printed m of the matching segment, then the antiderivative m,
/// then a bracketed root search on the quadrature oracle; each candidate must
/// pass plug-back. Requires 0 < epsilon <= 1, 0 < p_c < 1.
/// NoRootError if the oracle does not change sign on the admissible bracket.
Adjustment solve_fair_adjustment(Probability p_c, double epsilon);
Adjustment solve_definetti_adjustment(Probability p_c, double epsilon);
Adjustment solve_adjustment(Variant variant, Probability p_c, double epsilon);

/// Posterior mean minus p_c from kernel antiderivatives, without the
/// plug-back check. Cheap enough for per-trial use in simulation.
double fair_adjustment_fast(Variant variant, double p_c, double epsilon);

struct WeightSolution {
    double w1 = 0.5;
    /// Set at epsilon = 0, where every weight zeroes the margin.
    bool degenerate = false;
    /// |conditional mean seller margin| at w1.
    double residual = 0.0;
};

/// Weight on the seller's belief that zeroes the conditional mean seller
/// margin. Requires 0 < p_t < 1 and 0 <= epsilon <= 1.
WeightSolution solve_w1_star(Probability p_t, double epsilon);

namespace testing_hooks {

/// Adds `offset` to every evaluation of one printed segment's mean margin.
/// Lets the verification harness prove it can catch a wrong constant.
/// Not thread-safe with concurrent evaluations; set it before sweeping.
void tamper_segment(Variant variant, Segment segment, double offset) noexcept;
void clear_tamper() noexcept;

}  // namespace testing_hooks

}  // namespace noisyodds
