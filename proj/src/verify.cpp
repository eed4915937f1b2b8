#include "noisyodds/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/toms748_solve.hpp>

#include "noisyodds/errors.hpp"
#include "noisyodds/montecarlo.hpp"
#include "noisyodds/posterior.hpp"
#include "noisyodds/pricing.hpp"
#include "noisyodds/quadrature.hpp"

namespace noisyodds {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kNormalizationTolerance = 1e-9;
constexpr double kAdjustmentTolerance = 1e-8;

std::vector<double> steps(int count, double step)
{
    std::vector<double> out;
    for (int i = 1; i <= count; ++i) {
        out.push_back(i * step);
    }
    return out;
}

struct GridPoint {
    double p_c;
    double epsilon;
};

std::vector<GridPoint> build_grid(const VerifyOptions& o)
{
    const auto pcs = o.p_c_grid.empty() ? steps(19, 1.0 / 20.0) : o.p_c_grid;
    const auto epss = o.epsilon_grid.empty() ? steps(20, 1.0 / 20.0) : o.epsilon_grid;
    std::vector<GridPoint> grid;
    for (double e : epss) {
        for (double c : pcs) {
            grid.push_back({c, e});
        }
        // The boundary lines carry their own printed segments.
        for (double c : {(1.0 - e) / 2.0, (1.0 + e) / 2.0}) {
            if (c > 0.0 && c < 1.0 && std::find(pcs.begin(), pcs.end(), c) == pcs.end()) {
                grid.push_back({c, e});
            }
        }
    }
    return grid;
}

class Recorder {
public:
    explicit Recorder(std::vector<Finding>& out) : out_(out) {}

    // Status is ok when |closed - oracle| <= tolerance, otherwise `on_mismatch`.
    void compare(std::string check, Variant v, double c, double e, Segment s, double closed, double oracle,
                 double tolerance, const char* on_mismatch = status::kFail)
    {
        compare(std::move(check), std::string(to_string(v)), c, e, std::string(to_string(s)), closed, oracle,
                tolerance, on_mismatch);
    }

    void compare(std::string check, std::string variant, double c, double e, std::string segment, double closed,
                 double oracle, double tolerance, const char* on_mismatch = status::kFail)
    {
        const double diff = std::fabs(closed - oracle);
        const bool agree = diff <= tolerance;  // false for NaN
        out_.push_back({std::move(check), std::move(variant), c, e, std::move(segment), closed, oracle, diff, tolerance,
                        agree ? status::kOk : on_mismatch});
    }

    void raw(Finding f) { out_.push_back(std::move(f)); }

private:
    std::vector<Finding>& out_;
};

double root_oracle(Variant v, Probability p_c, double e)
{
    const double c = p_c.value();
    const auto f = [&](double m) { return quadrature_mean_margin(p_c, e, m, v); };
    double lo = -c + 1e-9;
    double hi = 1.0 - c - 1e-9;
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        return kNaN;
    }
    std::uintmax_t iterations = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        f, lo, hi, f_lo, f_hi, [](double x, double y) { return std::fabs(y - x) <= 1e-13; }, iterations);
    return 0.5 * (a + b);
}

void sweep_point(Recorder& rec, Variant v, const GridPoint& g, double tol)
{
    const Probability pc(g.p_c);
    Segment seg = Segment::Otherwise;
    try {
        seg = region(v, g.p_c, g.epsilon);
    } catch (const NoRegionError&) {
        rec.raw({"region", std::string(to_string(v)), g.p_c, g.epsilon, "none", kNaN, kNaN, kNaN, 0.0, status::kFail});
        return;
    }

    // Normalizer of the posterior.
    const KernelMoments analytic = kernel_moments(v, g.p_c, g.epsilon);
    const KernelMoments quad = quadrature_kernel_moments(v, g.p_c, g.epsilon);
    rec.compare("normalizer", v, g.p_c, g.epsilon, seg, analytic.mass, quad.mass, kNormalizationTolerance);
    const PosteriorDensity density(pc, g.epsilon, v);
    const auto bps = density.breakpoints();
    const double total = integrate([&](double t) { return density(t); }, bps.front(), bps.back(), bps);
    rec.compare("posterior-normalization", v, g.p_c, g.epsilon, seg, total, 1.0, kNormalizationTolerance);

    // Mean margin at a few shifts.
    for (double m : {0.0, 0.01, -0.01}) {
        if (!(g.p_c + m > 0.0 && g.p_c + m < 1.0)) {
            continue;
        }
        const auto eval = mean_margin(v, pc, g.epsilon, m);
        const double oracle = quadrature_mean_margin(pc, g.epsilon, m, v);
        rec.compare("mean-margin", v, g.p_c, g.epsilon, seg, eval.value, oracle, tol);
        const double weighted_oracle = oracle * quad.mass;
        rec.compare("printed-mean-margin", v, g.p_c, g.epsilon, seg, eval.printed_value, weighted_oracle, tol,
                    eval.printed_trusted ? status::kFail : status::kPrintedDefectCorrected);
    }

    // Adjustment m.
    const double m_root = root_oracle(v, pc, g.epsilon);
    rec.compare("printed-adjustment", v, g.p_c, g.epsilon, seg, printed_adjustment(v, seg, g.p_c, g.epsilon), m_root,
                kAdjustmentTolerance, status::kPrintedDefectCorrected);
    try {
        const Adjustment adj = solve_adjustment(v, pc, g.epsilon);
        rec.compare("adjustment", v, g.p_c, g.epsilon, seg, adj.m, m_root, kAdjustmentTolerance);
        rec.compare("adjustment-plug-back", v, g.p_c, g.epsilon, seg, adj.residual, 0.0, kPlugBackTolerance);
    } catch (const NoRootError&) {
        rec.raw({"adjustment", std::string(to_string(v)), g.p_c, g.epsilon, std::string(to_string(seg)), kNaN, m_root,
                 kNaN, kAdjustmentTolerance, status::kFail});
    }
}

void sweep_symmetry(Recorder& rec, Variant v, const std::vector<GridPoint>& grid)
{
    for (const auto& g : grid) {
        if (!(g.p_c < 0.5)) {
            continue;
        }
        const double m_lo = fair_adjustment_fast(v, g.p_c, g.epsilon);
        const double m_hi = fair_adjustment_fast(v, 1.0 - g.p_c, g.epsilon);
        rec.compare("adjustment-antisymmetry", v, g.p_c, g.epsilon, region(v, g.p_c, g.epsilon), m_lo, -m_hi, 1e-9);
        // Longshots are shortened: m has the sign of 1/2 - p_c.
        rec.compare("favourite-longshot-direction", v, g.p_c, g.epsilon, region(v, g.p_c, g.epsilon),
                    m_lo > 0.0 && m_hi < 0.0 ? 1.0 : 0.0, 1.0, 0.0);
    }
}

void sweep_pricing(Recorder& rec, const VerifyOptions& o)
{
    // Asymmetry of mispricing: the literal expression against the margins it summarises.
    for (double p_t : {0.3, 0.5, 0.8}) {
        for (double frac : {0.25, 0.5, 0.75}) {
            const double iota = frac * p_t;
            const Probability pt(p_t);
            const double costly = seller_objective_margin(pt, Probability(p_t - iota));
            const double beneficial = seller_objective_margin(pt, Probability(std::min(1.0, p_t + iota)));
            if (p_t + iota > 1.0) {
                continue;
            }
            const double literal = asymmetry_delta(pt, iota);
            const double net = net_asymmetry(pt, iota);
            rec.compare("asymmetry-difference", "pricing", p_t, iota, "-", literal, beneficial - costly, 1e-12);
            rec.compare("asymmetry-net", "pricing", p_t, iota, "-", net, beneficial + costly, 1e-12);
            // Printed claim: the asymmetry never enters the positive region.
            // The literal expression is positive; the net sum is the one that is not.
            rec.raw({"asymmetry-sign", "pricing", p_t, iota, "-", literal, net, std::fabs(literal - net), 0.0,
                     literal > 0.0 && net <= 0.0 ? status::kDocumentedDiscrepancy : status::kFail});
        }
    }

    // Equalising weight.
    for (double p_t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (double e : {0.25, 0.5, 0.75, 1.0}) {
            try {
                const auto s = solve_w1_star(Probability(p_t), e);
                rec.compare("w1-star-plug-back", "pricing", p_t, e, "w1=" + format_double(s.w1), s.residual, 0.0,
                            kPlugBackTolerance);
            } catch (const NoRootError&) {
                rec.raw({"w1-star-plug-back", "pricing", p_t, e, "-", kNaN, 0.0, kNaN, kPlugBackTolerance,
                         status::kFail});
            }
        }
    }

    if (o.pair_draws == 0) {
        return;
    }
    std::uint64_t seed = o.seed;
    for (double p_t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (double e : {0.25, 0.5, 0.75, 1.0}) {
            for (double w1 : {0.25, 0.5, 0.75}) {
                const WeightRule rule(w1);
                const double closed = conditional_mean_seller_margin(Probability(p_t), e, rule);
                const auto mc = conditioned_margin_mc(p_t, e, rule, o.pair_draws, seed++, o.threads);
                rec.compare("conditional-margin-mc", "pricing", p_t, e, "w1=" + format_double(w1), closed, mc.mean,
                            o.se_mult * mc.std_error);
            }
        }
    }
}

void sweep_games(Recorder& rec, const VerifyOptions& o)
{
    if (o.game_trials == 0) {
        return;
    }
    constexpr double kEps = 0.5;
    constexpr double kHalfWidth = 0.005;
    const std::array<double, 5> centers{0.1, 0.3, 0.5, 0.7, 0.9};

    for (auto mode : {AdjustmentMode::None, AdjustmentMode::FairSolver}) {
        GameConfig g;
        g.epsilon = kEps;
        g.trials = o.game_trials;
        g.master_seed = o.seed + (mode == AdjustmentMode::None ? 101 : 202);
        g.adjustment = mode;
        g.threads = o.threads;
        std::vector<MarginAccumulator> bins;
        for (double c : centers) {
            bins.emplace_back(pc_bin(c, kHalfWidth), "p_c=" + format_double(c));
        }
        MarginAccumulator overall(nullptr, "all");
        simulate(g, [&](std::span<const GameRecord> block) {
            for (auto& b : bins) {
                b.add(block);
            }
            overall.add(block);
        });
        const bool fair = mode == AdjustmentMode::FairSolver;
        const std::string check = fair ? "game-fair-binned-margin" : "game-binned-margin";
        for (std::size_t i = 0; i < centers.size(); ++i) {
            const auto est = bins[i].estimate();
            const double closed = fair ? 0.0 : basicgame_mean_margin(Probability(centers[i]), kEps, 0.0).value;
            rec.compare(check, "basic", centers[i], kEps, std::string(to_string(basicgame_region(centers[i], kEps))),
                        closed, est.mean, o.se_mult * est.std_error);
        }
        if (fair) {
            const auto est = overall.estimate();
            rec.compare("game-fair-overall", "basic", kNaN, kEps, "-", 0.0, est.mean, o.se_mult * est.std_error);
        }
    }

    for (auto mode : {AdjustmentMode::None, AdjustmentMode::FairSolver}) {
        GameConfig g;
        g.epsilon = kEps;
        g.trials = o.game_trials;
        g.master_seed = o.seed + (mode == AdjustmentMode::None ? 303 : 404);
        g.adjustment = mode;
        g.threads = o.threads;
        MarginAccumulator subject(nullptr, "subject", NormalizePer::Bet, PayoffOf::Player1);
        simulate_definetti(g, [&](std::span<const GameRecord> block) { subject.add(block); });
        const auto est = subject.estimate();
        if (mode == AdjustmentMode::None) {
            // Honest quoting loses: the mean sits more than se_mult standard errors below zero.
            const double bound = -o.se_mult * est.std_error;
            rec.raw({"definetti-honest-loses", "definetti", kNaN, kEps, "-", est.mean, bound, std::fabs(est.mean - bound),
                     o.se_mult * est.std_error, est.mean < bound ? status::kOk : status::kFail});
        } else {
            rec.compare("definetti-fair-zero", "definetti", kNaN, kEps, "-", 0.0, est.mean, o.se_mult * est.std_error);
        }
    }
}

}  // namespace

bool VerifyReport::passed() const noexcept
{
    return count(status::kFail) == 0;
}

std::size_t VerifyReport::count(const std::string& s) const noexcept
{
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [&](const Finding& f) { return f.status == s; }));
}

Table VerifyReport::to_table() const
{
    Table t{{"check", "variant", "p_c", "epsilon", "segment_id", "closed_form", "oracle", "abs_diff", "tolerance",
             "status"},
            {}};
    for (const auto& f : findings) {
        t.add_row({f.check, f.variant, f.p_c, f.epsilon, f.segment_id, f.closed_form, f.oracle, f.abs_diff, f.tolerance,
                   f.status});
    }
    return t;
}

VerifyReport run_verification(const VerifyOptions& options)
{
    struct TamperGuard {
        explicit TamperGuard(const std::optional<TamperRequest>& t)
        {
            if (t) {
                testing_hooks::tamper_segment(t->variant, t->segment, t->offset);
            }
        }
        ~TamperGuard() { testing_hooks::clear_tamper(); }
        TamperGuard(const TamperGuard&) = delete;
        TamperGuard& operator=(const TamperGuard&) = delete;
    } guard(options.tamper);

    VerifyReport report;
    Recorder rec(report.findings);
    const auto grid = build_grid(options);
    for (auto v : {Variant::BasicGame, Variant::DeFinetti}) {
        for (const auto& g : grid) {
            sweep_point(rec, v, g, options.abs_tol);
        }
        sweep_symmetry(rec, v, grid);
    }
    sweep_pricing(rec, options);
    sweep_games(rec, options);
    return report;
}

}  // namespace noisyodds
