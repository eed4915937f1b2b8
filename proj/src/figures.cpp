#include "noisyodds/figures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "noisyodds/beliefs.hpp"
#include "noisyodds/errors.hpp"
#include "noisyodds/fairsolver.hpp"
#include "noisyodds/posterior.hpp"
#include "noisyodds/pricing.hpp"

namespace noisyodds {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> axis(std::size_t points)
{
    std::vector<double> xs(points);
    for (std::size_t i = 0; i < points; ++i) {
        xs[i] = static_cast<double>(i + 1) / static_cast<double>(points + 1);
    }
    return xs;
}

std::vector<double> pick(const std::vector<double>& given, std::vector<double> fallback)
{
    return given.empty() ? fallback : given;
}

Table envelope(const FigureGrid& g)
{
    Table t{{"p_t", "epsilon", "e", "l", "h"}, {}};
    for (double eps : pick(g.epsilons, {0.25, 0.5, 0.75, 1.0})) {
        std::vector<double> xs = axis(g.points);
        xs.insert(xs.begin(), 0.0);
        xs.push_back(1.0);
        for (double p : xs) {
            const auto env = belief_envelope(Probability(p), eps);
            t.add_row({p, eps, env.e, env.l.value(), env.h.value()});
        }
    }
    return t;
}

Table evidence(const FigureGrid& g)
{
    Table t{{"p_t", "epsilon", "woe", "pdf", "cdf"}, {}};
    for (double eps : pick(g.epsilons, {0.5, 1.0})) {
        for (double p : pick(g.curves, {0.05, 0.5, 0.95})) {
            const auto env = belief_envelope(Probability(p), eps);
            if (env.degenerate()) {
                continue;
            }
            auto [lo, hi] = woe_support(env);
            // An open end is cut five bans past the finite one, or past the
            // truth's own evidence when both ends are open.
            if (!std::isfinite(lo) && !std::isfinite(hi)) {
                const double centre = probability_to_woe(Probability(p)).bans;
                lo = centre - 5.0;
                hi = centre + 5.0;
            }
            lo = std::isfinite(lo) ? lo : hi - 5.0;
            hi = std::isfinite(hi) ? hi : lo + 5.0;
            for (double u : axis(g.points)) {
                const WeightOfEvidence w{lo + (hi - lo) * u};
                t.add_row({p, eps, w.bans, woe_pdf(w, env), woe_cdf(w, env)});
            }
        }
    }
    return t;
}

Table seller_margin(const FigureGrid& g)
{
    Table t{{"p_t", "epsilon", "w1", "margin"}, {}};
    const WeightRule rule(g.w1);
    for (double eps : pick(g.epsilons, {0.25, 0.5, 0.75, 1.0})) {
        for (double p : axis(g.points)) {
            t.add_row({p, eps, g.w1, conditional_mean_seller_margin(Probability(p), eps, rule)});
        }
    }
    return t;
}

Table equalising_weight(const FigureGrid& g)
{
    Table t{{"p_t", "epsilon", "w1_star", "degenerate"}, {}};
    for (double eps : pick(g.epsilons, {0.0, 0.25, 0.5, 0.75, 1.0})) {
        for (double p : axis(g.points)) {
            try {
                const auto s = solve_w1_star(Probability(p), eps);
                t.add_row({p, eps, s.w1, std::int64_t{s.degenerate ? 1 : 0}});
            } catch (const NoRootError&) {
                t.add_row({p, eps, kNaN, std::int64_t{0}});
            }
        }
    }
    return t;
}

Table posterior(const FigureGrid& g)
{
    Table t{{"p_c", "epsilon", "p_t", "density", "kernel"}, {}};
    for (double eps : pick(g.epsilons, {0.5, 1.0})) {
        for (double c : pick(g.curves, {0.1, 0.3, 0.5, 0.7, 0.9})) {
            const PosteriorDensity f(Probability(c), eps, Variant::BasicGame);
            for (double p : axis(g.points)) {
                t.add_row({c, eps, p, f(p), f.kernel(p)});
            }
        }
    }
    return t;
}

Table adjustment_series(const FigureGrid& g, Variant variant)
{
    Table t{{"p_c", "epsilon", "margin_m0", "m", "segment", "m_source"}, {}};
    for (double eps : pick(g.epsilons, {0.25, 0.5, 0.75, 1.0})) {
        for (double c : axis(g.points)) {
            const Probability pc(c);
            const auto eval = mean_margin(variant, pc, eps, 0.0);
            const auto adj = solve_adjustment(variant, pc, eps);
            t.add_row({c, eps, eval.value, adj.m, std::string(to_string(eval.segment_id)),
                       std::string(to_string(adj.source))});
        }
    }
    return t;
}

Table fair_odds(const FigureGrid& g)
{
    Table t{{"p_c", "epsilon", "m", "odds_consensus", "odds_fair"}, {}};
    for (double eps : pick(g.epsilons, {0.25, 0.5, 0.75, 1.0})) {
        for (double c : axis(g.points)) {
            const auto adj = solve_fair_adjustment(Probability(c), eps);
            t.add_row({c, eps, adj.m, 1.0 / c, adj.fair_odds()});
        }
    }
    return t;
}

}  // namespace

const std::vector<int>& known_figures()
{
    static const std::vector<int> ids{1, 2, 3, 4, 6, 7, 8, 9};
    return ids;
}

Table figure_series(int figure_id, const FigureGrid& grid)
{
    if (grid.points < 1) {
        throw ConfigError("figure grid needs at least one point");
    }
    switch (figure_id) {
    case 1:
        return envelope(grid);
    case 2:
        return evidence(grid);
    case 3:
        return seller_margin(grid);
    case 4:
        return equalising_weight(grid);
    case 6:
        return posterior(grid);
    case 7:
        return adjustment_series(grid, Variant::BasicGame);
    case 8:
        return fair_odds(grid);
    case 9:
        return adjustment_series(grid, Variant::DeFinetti);
    default:
        throw ConfigError("unknown figure id " + std::to_string(figure_id) + " (known: 1 2 3 4 6 7 8 9)");
    }
}

}  // namespace noisyodds
