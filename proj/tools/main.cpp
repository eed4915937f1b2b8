#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "noisyodds/errors.hpp"
#include "noisyodds/fairsolver.hpp"
#include "noisyodds/figures.hpp"
#include "noisyodds/montecarlo.hpp"
#include "noisyodds/posterior.hpp"
#include "noisyodds/pricing.hpp"
#include "noisyodds/verify.hpp"
#include "output.hpp"

#ifndef NOISYODDS_VERSION
#define NOISYODDS_VERSION "unknown"
#endif

namespace noisyodds::cli {
namespace {

constexpr int kExitFinding = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNoRoot = 3;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Common {
    std::string out;
    std::uint64_t seed = 1;
};

void add_common(CLI::App& sub, Common& c)
{
    sub.add_option("--out", c.out, "CSV output path; a JSON manifest is written to <out>.json. Default: stdout");
    sub.add_option("--seed", c.seed, "Master seed (env NOISYODDS_SEED)")->envname("NOISYODDS_SEED")->capture_default_str();
}

RunManifest manifest_for(const CLI::App& sub, const Common& c)
{
    return {sub.get_name(), collect_parameters(sub), c.seed, NOISYODDS_VERSION, {}};
}

Variant variant_option(const std::string& name)
{
    return parse_variant(name);
}

// ---------------------------------------------------------------- fair-odds

struct FairOddsArgs {
    Common common;
    std::vector<double> p_c;
    std::vector<double> eps;
    std::string variant = "basic";
};

void setup_fair_odds(CLI::App& app, FairOddsArgs& a, CLI::App*& sub)
{
    sub = app.add_subcommand("fair-odds", "Adjustment m restoring zero expected margin, and the fair odds 1/(p_c+m)");
    sub->add_option("--pc", a.p_c, "Consensus probability (comma list allowed)")->required()->delimiter(',');
    sub->add_option("--eps", a.eps, "Noise fraction epsilon (comma list allowed)")->required()->delimiter(',');
    sub->add_option("--variant", a.variant, "basic or definetti")->capture_default_str();
    add_common(*sub, a.common);
}

int run_fair_odds(const CLI::App& sub, const FairOddsArgs& a)
{
    const Variant v = variant_option(a.variant);
    Table t{{"variant", "p_c", "epsilon", "m", "fair_probability", "odds_consensus", "odds_fair", "segment", "m_source",
             "residual"},
            {}};
    for (double e : a.eps) {
        for (double c : a.p_c) {
            const auto adj = solve_adjustment(v, Probability(c), e);
            t.add_row({std::string(to_string(v)), c, e, adj.m, adj.fair_probability(), 1.0 / c, adj.fair_odds(),
                       std::string(to_string(adj.segment)), std::string(to_string(adj.source)), adj.residual});
        }
    }
    emit(t, a.common.out, manifest_for(sub, a.common));
    return 0;
}

// ------------------------------------------------------------------- w1star

struct W1StarArgs {
    Common common;
    std::vector<double> p_t;
    std::vector<double> eps;
};

void setup_w1star(CLI::App& app, W1StarArgs& a, CLI::App*& sub)
{
    sub = app.add_subcommand("w1star", "Consensus weight on the seller's belief that zeroes the seller's mean margin");
    sub->add_option("--pt", a.p_t, "True probability (comma list allowed)")->required()->delimiter(',');
    sub->add_option("--eps", a.eps, "Noise fraction epsilon (comma list allowed)")->required()->delimiter(',');
    add_common(*sub, a.common);
}

int run_w1star(const CLI::App& sub, const W1StarArgs& a)
{
    Table t{{"p_t", "epsilon", "w1_star", "degenerate", "residual"}, {}};
    for (double e : a.eps) {
        for (double p : a.p_t) {
            const auto s = solve_w1_star(Probability(p), e);
            t.add_row({p, e, s.w1, std::int64_t{s.degenerate ? 1 : 0}, s.residual});
        }
    }
    emit(t, a.common.out, manifest_for(sub, a.common));
    return 0;
}

// ------------------------------------------------------------------- margin

struct MarginArgs {
    Common common;
    std::vector<double> p_t;
    std::vector<double> p_c;
    std::vector<double> eps;
    double w1 = 0.5;
    double m = 0.0;
    std::string variant = "basic";
};

void setup_margin(CLI::App& app, MarginArgs& a, CLI::App*& sub)
{
    sub = app.add_subcommand("margin",
                             "Seller's mean margin: given the truth (--pt) or averaged over the posterior of a "
                             "consensus (--pc)");
    auto* pt = sub->add_option("--pt", a.p_t, "True probability (comma list allowed)")->delimiter(',');
    auto* pc = sub->add_option("--pc", a.p_c, "Consensus probability (comma list allowed)")->delimiter(',');
    pt->excludes(pc);
    sub->add_option("--eps", a.eps, "Noise fraction epsilon (comma list allowed)")->required()->delimiter(',');
    sub->add_option("--w1", a.w1, "Weight on the seller's belief (with --pt)")->capture_default_str();
    sub->add_option("--m", a.m, "Shift added to the consensus (with --pc)")->capture_default_str();
    sub->add_option("--variant", a.variant, "basic or definetti (with --pc)")->capture_default_str();
    add_common(*sub, a.common);
}

int run_margin(const CLI::App& sub, const MarginArgs& a)
{
    if (a.p_t.empty() == a.p_c.empty()) {
        throw ConfigError("margin needs exactly one of --pt or --pc");
    }
    Table t;
    if (!a.p_t.empty()) {
        const WeightRule rule(a.w1);
        t = Table{{"p_t", "epsilon", "w1", "margin"}, {}};
        for (double e : a.eps) {
            for (double p : a.p_t) {
                t.add_row({p, e, a.w1, conditional_mean_seller_margin(Probability(p), e, rule)});
            }
        }
    } else {
        const Variant v = variant_option(a.variant);
        t = Table{{"variant", "p_c", "epsilon", "m", "segment", "margin", "kernel_weighted", "printed",
                   "printed_trusted", "normalizer"},
                  {}};
        for (double e : a.eps) {
            for (double c : a.p_c) {
                const auto r = mean_margin(v, Probability(c), e, a.m);
                t.add_row({std::string(to_string(v)), c, e, a.m, std::string(to_string(r.segment_id)), r.value,
                           r.weighted_value, r.printed_value, std::int64_t{r.printed_trusted ? 1 : 0}, r.normalizer});
            }
        }
    }
    emit(t, a.common.out, manifest_for(sub, a.common));
    return 0;
}

// ---------------------------------------------------------------- posterior

struct PosteriorArgs {
    Common common;
    std::vector<double> p_c;
    std::vector<double> eps;
    std::string variant = "basic";
    std::size_t points = 199;
};

void setup_posterior(CLI::App& app, PosteriorArgs& a, CLI::App*& sub)
{
    sub = app.add_subcommand("posterior", "Density of the true probability given a consensus");
    sub->add_option("--pc", a.p_c, "Consensus probability (comma list allowed)")->required()->delimiter(',');
    sub->add_option("--eps", a.eps, "Noise fraction epsilon (comma list allowed)")->required()->delimiter(',');
    sub->add_option("--variant", a.variant, "basic or definetti")->capture_default_str();
    sub->add_option("--points", a.points, "Evaluation points spread across the support")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_common(*sub, a.common);
}

int run_posterior(const CLI::App& sub, const PosteriorArgs& a)
{
    const Variant v = variant_option(a.variant);
    Table t{{"variant", "p_c", "epsilon", "p_t", "density", "kernel", "normalizer", "mean"}, {}};
    for (double e : a.eps) {
        for (double c : a.p_c) {
            const PosteriorDensity f(Probability(c), e, v);
            const double lo = f.support_lo().value();
            const double hi = f.support_hi().value();
            for (std::size_t i = 0; i < a.points; ++i) {
                const double p = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(a.points + 1);
                t.add_row({std::string(to_string(v)), c, e, p, f(p), f.kernel(p), f.normalizer(), f.mean()});
            }
        }
    }
    emit(t, a.common.out, manifest_for(sub, a.common));
    return 0;
}

// ----------------------------------------------------------------- simulate

struct SimulateArgs {
    Common common;
    std::string variant = "basic";
    std::optional<double> p_t;
    double eps = 0.5;
    double w1 = 0.5;
    std::uint64_t trials = 1'000'000;
    std::string strategy = "always";
    std::string strategy2 = "always";
    std::string adjust = "none";
    unsigned threads = 0;
    double bin_half_width = 0.05;
    std::string summary_out;
};

void setup_simulate(CLI::App& app, SimulateArgs& a, CLI::App*& sub)
{
    sub = app.add_subcommand("simulate", "Monte Carlo of the betting game; ledger CSV plus margin summary");
    sub->add_option("--variant", a.variant, "basic or definetti")->capture_default_str();
    sub->add_option("--pt", a.p_t, "Fixed true probability. Default: uniform prior on (0, 1)");
    sub->add_option("--eps", a.eps, "Noise fraction epsilon")->capture_default_str();
    sub->add_option("--w1", a.w1, "Weight on the seller's belief in the consensus")->capture_default_str();
    sub->add_option("--trials", a.trials, "Number of trials")->capture_default_str();
    sub->add_option("--strategy", a.strategy, "Player 1 strategy: always or figure5")->capture_default_str();
    sub->add_option("--strategy2", a.strategy2, "Player 2 strategy: always or figure5")->capture_default_str();
    sub->add_option("--adjust", a.adjust, "none or fair (apply the solved adjustment m)")
        ->capture_default_str()
        ->check(CLI::IsMember({"none", "fair"}));
    sub->add_option("--threads", a.threads, "Worker threads, 0 = all cores (never changes results)")
        ->capture_default_str();
    sub->add_option("--bin-half-width", a.bin_half_width, "Half-width of the p_c bins in the summary")
        ->capture_default_str();
    sub->add_option("--summary-out", a.summary_out, "Summary CSV path. Default: stdout");
    add_common(*sub, a.common);
    sub->get_option("--out")->description("Ledger CSV path (one row per trial); manifest at <out>.json. Default: none");
}

void add_estimate(Table& t, const std::string& group, const MarginAccumulator& acc)
{
    try {
        const auto e = acc.estimate();
        t.add_row({group, e.filter_description, static_cast<std::int64_t>(e.n), e.mean, e.std_error});
    } catch (const ConfigError&) {
        t.add_row({group, acc.description(), static_cast<std::int64_t>(acc.count()), kNaN, kNaN});
    }
}

int run_simulate(const CLI::App& sub, const SimulateArgs& a)
{
    const Variant v = variant_option(a.variant);
    GameConfig g;
    g.truth = a.p_t ? TruthMode::fixed(*a.p_t) : TruthMode::uniform_prior();
    g.epsilon = a.eps;
    g.weight_rule = WeightRule(a.w1);
    g.player1 = parse_strategy(a.strategy);
    g.player2 = parse_strategy(a.strategy2);
    g.adjustment = a.adjust == "fair" ? AdjustmentMode::FairSolver : AdjustmentMode::None;
    g.trials = a.trials;
    g.master_seed = a.common.seed;
    g.threads = a.threads;
    g.validate(v);

    struct Group {
        std::string name;
        MarginAccumulator acc;
    };
    std::vector<Group> groups;
    const auto all = [](const GameRecord&) { return true; };
    if (v == Variant::BasicGame) {
        groups.push_back({"role", MarginAccumulator(all, "seller per bet", NormalizePer::Bet, PayoffOf::Seller)});
        groups.push_back({"role", MarginAccumulator(all, "buyer per bet", NormalizePer::Bet, PayoffOf::Buyer)});
    }
    groups.push_back({"player", MarginAccumulator(all, "player1 per bet", NormalizePer::Bet, PayoffOf::Player1)});
    groups.push_back({"player", MarginAccumulator(all, "player2 per bet", NormalizePer::Bet, PayoffOf::Player2)});
    groups.push_back({"player", MarginAccumulator(all, "player1 per trial", NormalizePer::Trial, PayoffOf::Player1)});
    groups.push_back({"player", MarginAccumulator(all, "player2 per trial", NormalizePer::Trial, PayoffOf::Player2)});
    const PayoffOf binned = v == Variant::BasicGame ? PayoffOf::Seller : PayoffOf::Player1;
    for (double lo = 0.0; lo < 1.0 - 1e-12; lo += 2.0 * a.bin_half_width) {
        const double center = lo + a.bin_half_width;
        groups.push_back({"p_c_bin", MarginAccumulator(pc_bin(center, a.bin_half_width),
                                                       "p_c=" + format_double(center), NormalizePer::Bet, binned)});
    }

    std::ofstream ledger;
    if (!a.common.out.empty()) {
        ledger.open(a.common.out);
        if (!ledger) {
            throw std::runtime_error("cannot open " + a.common.out + " for writing");
        }
        ledger << kLedgerHeader << '\n';
    }
    const auto sink = [&](std::span<const GameRecord> block) {
        for (auto& grp : groups) {
            grp.acc.add(block);
        }
        if (ledger.is_open()) {
            write_ledger_csv(ledger, block, false);
        }
    };
    if (v == Variant::BasicGame) {
        simulate(g, sink);
    } else {
        simulate_definetti(g, sink);
    }
    ledger.close();

    Table summary{{"group", "filter", "n", "mean", "std_error"}, {}};
    for (const auto& grp : groups) {
        add_estimate(summary, grp.name, grp.acc);
    }

    RunManifest manifest = manifest_for(sub, a.common);
    if (!a.common.out.empty()) {
        manifest.output_paths.push_back(a.common.out);
    }
    if (a.summary_out.empty()) {
        summary.write_csv(std::cout);
    } else {
        std::ofstream s(a.summary_out);
        summary.write_csv(s);
        manifest.output_paths.push_back(a.summary_out);
        write_manifest(manifest, sidecar_path(a.summary_out));
    }
    if (!a.common.out.empty()) {
        write_manifest(manifest, sidecar_path(a.common.out));
    }
    return 0;
}

// ------------------------------------------------------------------ figures

struct FiguresArgs {
    Common common;
    int id = 0;
    std::size_t points = 99;
    std::vector<double> eps;
    std::vector<double> curves;
    double w1 = 0.5;
};

void setup_figures(CLI::App& app, FiguresArgs& a, CLI::App*& sub)
{
    sub = app.add_subcommand("figures", "Data series behind a figure (ids 1 2 3 4 6 7 8 9)");
    sub->add_option("--id", a.id, "Figure id")->required();
    sub->add_option("--points", a.points, "Samples along the horizontal axis")->capture_default_str();
    sub->add_option("--eps", a.eps, "Noise levels (comma list). Default: the figure's own set")->delimiter(',');
    sub->add_option("--curves", a.curves, "Curve parameters: p_t for figure 2, p_c for figure 6")->delimiter(',');
    sub->add_option("--w1", a.w1, "Weight on the seller's belief (figure 3)")->capture_default_str();
    add_common(*sub, a.common);
}

int run_figures(const CLI::App& sub, const FiguresArgs& a)
{
    FigureGrid grid;
    grid.points = a.points;
    grid.epsilons = a.eps;
    grid.curves = a.curves;
    grid.w1 = a.w1;
    emit(figure_series(a.id, grid), a.common.out, manifest_for(sub, a.common));
    return 0;
}

// ------------------------------------------------------------------- verify

struct VerifyArgs {
    Common common;
    double abs_tol = 1e-6;
    double se_mult = 3.0;
    std::vector<double> p_c_grid;
    std::vector<double> eps_grid;
    std::uint64_t pair_draws = 10'000'000;
    std::uint64_t game_trials = 20'000'000;
    unsigned threads = 0;
    std::string tamper;
    double tamper_offset = 1e-3;
};

void setup_verify(CLI::App& app, VerifyArgs& a, CLI::App*& sub)
{
    sub = app.add_subcommand("verify", "Sweep every closed form against its oracle and run the Monte Carlo checks");
    sub->add_option("--abs-tol", a.abs_tol, "Closed-form vs oracle tolerance")->capture_default_str();
    sub->add_option("--se-mult", a.se_mult, "Monte Carlo tolerance in standard errors")->capture_default_str();
    sub->add_option("--pc-grid", a.p_c_grid, "p_c grid (comma list). Default: 0.05..0.95 step 0.05")->delimiter(',');
    sub->add_option("--eps-grid", a.eps_grid, "epsilon grid (comma list). Default: 0.05..1 step 0.05")
        ->delimiter(',');
    sub->add_option("--pair-draws", a.pair_draws, "Draws per conditioned-margin check, 0 skips")
        ->capture_default_str();
    sub->add_option("--game-trials", a.game_trials, "Trials per game-level check, 0 skips")->capture_default_str();
    sub->add_option("--threads", a.threads, "Worker threads, 0 = all cores")->capture_default_str();
    sub->add_option("--tamper", a.tamper, "Perturb one shipped segment, [variant:]segment (harness self-test)");
    sub->add_option("--tamper-offset", a.tamper_offset, "Offset added by --tamper")->capture_default_str();
    add_common(*sub, a.common);
    sub->get_option("--out")->default_str("verify_findings.csv")->description("Findings CSV; manifest at <out>.json");
}

TamperRequest parse_tamper(const std::string& text, double offset)
{
    TamperRequest t;
    t.offset = offset;
    std::string segment = text;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        t.variant = parse_variant(text.substr(0, colon));
        segment = text.substr(colon + 1);
    }
    const auto s = parse_segment(segment);
    if (!s) {
        throw ConfigError("unknown segment '" + segment + "' (expected i..ix or otherwise)");
    }
    t.segment = *s;
    return t;
}

int run_verify(const CLI::App& sub, const VerifyArgs& a)
{
    VerifyOptions o;
    o.abs_tol = a.abs_tol;
    o.se_mult = a.se_mult;
    o.p_c_grid = a.p_c_grid;
    o.epsilon_grid = a.eps_grid;
    o.pair_draws = a.pair_draws;
    o.game_trials = a.game_trials;
    o.seed = a.common.seed;
    o.threads = a.threads;
    if (!a.tamper.empty()) {
        o.tamper = parse_tamper(a.tamper, a.tamper_offset);
    }
    const std::string out = a.common.out.empty() ? "verify_findings.csv" : a.common.out;
    const VerifyReport report = run_verification(o);
    emit(report.to_table(), out, manifest_for(sub, a.common));

    std::cout << "findings: " << report.findings.size() << "  ok: " << report.count(status::kOk)
              << "  printed-defect-corrected: " << report.count(status::kPrintedDefectCorrected)
              << "  documented-discrepancy: " << report.count(status::kDocumentedDiscrepancy)
              << "  fail: " << report.count(status::kFail) << '\n';
    if (report.passed()) {
        return 0;
    }
    for (const auto& f : report.findings) {
        if (f.status == status::kFail) {
            std::cout << "FAIL " << f.check << ' ' << f.variant << " p_c=" << format_double(f.p_c)
                      << " epsilon=" << format_double(f.epsilon) << " segment=" << f.segment_id
                      << " diff=" << format_double(f.abs_diff) << '\n';
        }
    }
    std::cout << "findings written to " << out << '\n';
    return kExitFinding;
}

int run(int argc, char** argv)
{
    CLI::App app{"Betting with noisy probabilities: fair odds, margins, posteriors, simulation and verification"};
    app.set_version_flag("--version", NOISYODDS_VERSION);
    app.require_subcommand(1);

    FairOddsArgs fair;
    W1StarArgs w1;
    MarginArgs margin;
    PosteriorArgs post;
    SimulateArgs sim;
    FiguresArgs fig;
    VerifyArgs ver;
    CLI::App *s_fair, *s_w1, *s_margin, *s_post, *s_sim, *s_fig, *s_ver;
    setup_fair_odds(app, fair, s_fair);
    setup_w1star(app, w1, s_w1);
    setup_margin(app, margin, s_margin);
    setup_posterior(app, post, s_post);
    setup_simulate(app, sim, s_sim);
    setup_figures(app, fig, s_fig);
    setup_verify(app, ver, s_ver);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (*s_fair) return run_fair_odds(*s_fair, fair);
        if (*s_w1) return run_w1star(*s_w1, w1);
        if (*s_margin) return run_margin(*s_margin, margin);
        if (*s_post) return run_posterior(*s_post, post);
        if (*s_sim) return run_simulate(*s_sim, sim);
        if (*s_fig) return run_figures(*s_fig, fig);
        if (*s_ver) return run_verify(*s_ver, ver);
    } catch (const NoRootError& e) {
        std::cerr << "no root: " << e.what() << '\n';
        return kExitNoRoot;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const DegenerateError& e) {
        std::cerr << "degenerate: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NoRegionError& e) {
        std::cerr << "no region: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitValidation;
}

}  // namespace
}  // namespace noisyodds::cli

int main(int argc, char** argv)
{
    try {
        return noisyodds::cli::run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
