#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "noisyodds/beliefs.hpp"
#include "noisyodds/errors.hpp"
#include "noisyodds/fairsolver.hpp"
#include "noisyodds/figures.hpp"
#include "noisyodds/montecarlo.hpp"
#include "noisyodds/posterior.hpp"
#include "noisyodds/pricing.hpp"
#include "noisyodds/verify.hpp"

namespace py = pybind11;
using namespace noisyodds;

namespace {

Probability prob(double p)
{
    return Probability(p);
}

py::dict evaluation_dict(const PiecewiseEvaluation& r)
{
    py::dict d;
    d["variant"] = std::string(to_string(r.variant));
    d["segment"] = std::string(to_string(r.segment_id));
    d["value"] = r.value;
    d["weighted_value"] = r.weighted_value;
    d["printed_value"] = r.printed_value;
    d["printed_trusted"] = r.printed_trusted;
    d["normalizer"] = r.normalizer;
    d["substitutions"] = r.substitutions;
    return d;
}

py::dict adjustment_dict(const Adjustment& a)
{
    py::dict d;
    d["p_c"] = a.p_c.value();
    d["epsilon"] = a.epsilon;
    d["m"] = a.m;
    d["variant"] = std::string(to_string(a.variant));
    d["segment"] = std::string(to_string(a.segment));
    d["source"] = std::string(to_string(a.source));
    d["residual"] = a.residual;
    d["fair_probability"] = a.fair_probability();
    d["fair_odds"] = a.fair_odds();
    return d;
}

py::object cell_to_py(const Cell& c)
{
    return std::visit([](const auto& v) -> py::object { return py::cast(v); }, c);
}

py::dict table_dict(const Table& t)
{
    py::dict d;
    for (std::size_t j = 0; j < t.columns.size(); ++j) {
        py::list col;
        for (const auto& row : t.rows) {
            col.append(cell_to_py(row[j]));
        }
        d[py::str(t.columns[j])] = col;
    }
    return d;
}

GameConfig make_config(double epsilon, std::optional<double> p_t, double w1, const std::string& strategy,
                       const std::string& strategy2, const std::string& adjust, std::uint64_t trials,
                       std::uint64_t seed, unsigned threads)
{
    GameConfig g;
    g.truth = p_t ? TruthMode::fixed(*p_t) : TruthMode::uniform_prior();
    g.epsilon = epsilon;
    g.weight_rule = WeightRule(w1);
    g.player1 = parse_strategy(strategy);
    g.player2 = parse_strategy(strategy2);
    if (adjust != "none" && adjust != "fair") {
        throw ConfigError("adjust must be 'none' or 'fair'");
    }
    g.adjustment = adjust == "fair" ? AdjustmentMode::FairSolver : AdjustmentMode::None;
    g.trials = trials;
    g.master_seed = seed;
    g.threads = threads;
    return g;
}

py::dict ledger_columns(const GameLedger& ledger)
{
    const auto n = static_cast<py::ssize_t>(ledger.size());
    py::array_t<std::uint64_t> trial_id(n);
    py::array_t<double> p_t(n), p_b(n), p_s(n), p_c(n), m(n), odds(n), pay_b(n), pay_s(n), pay_1(n);
    std::vector<std::string> role(ledger.size()), outcome(ledger.size());
    auto tid = trial_id.mutable_unchecked<1>();
    auto pt = p_t.mutable_unchecked<1>(), pb = p_b.mutable_unchecked<1>(), ps = p_s.mutable_unchecked<1>(),
         pc = p_c.mutable_unchecked<1>(), mm = m.mutable_unchecked<1>(), od = odds.mutable_unchecked<1>(),
         yb = pay_b.mutable_unchecked<1>(), ys = pay_s.mutable_unchecked<1>(), y1 = pay_1.mutable_unchecked<1>();
    for (py::ssize_t i = 0; i < n; ++i) {
        const auto& r = ledger[static_cast<std::size_t>(i)];
        tid(i) = r.trial_id;
        pt(i) = r.p_t;
        pb(i) = r.p_b;
        ps(i) = r.p_s;
        pc(i) = r.p_c;
        mm(i) = r.m_applied;
        od(i) = r.odds;
        yb(i) = r.payoff_buyer;
        ys(i) = r.payoff_seller;
        y1(i) = r.payoff_player1();
        role[static_cast<std::size_t>(i)] = std::string(to_string(r.role_of_player1));
        outcome[static_cast<std::size_t>(i)] = std::string(to_string(r.outcome));
    }
    py::dict d;
    d["trial_id"] = trial_id;
    d["p_t"] = p_t;
    d["p_b"] = p_b;
    d["p_s"] = p_s;
    d["p_c"] = p_c;
    d["m_applied"] = m;
    d["odds"] = odds;
    d["payoff_buyer"] = pay_b;
    d["payoff_seller"] = pay_s;
    d["payoff_player1"] = pay_1;
    d["role_of_player1"] = role;
    d["outcome"] = outcome;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Fair odds, margins, posteriors and simulation for betting with noisy probabilities";

    static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
    static py::exception<DegenerateError> degenerate_error(m, "DegenerateError", PyExc_ArithmeticError);
    static py::exception<NoRegionError> no_region_error(m, "NoRegionError", PyExc_LookupError);
    static py::exception<NoRootError> no_root_error(m, "NoRootError", PyExc_RuntimeError);
    static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const DomainError& e) {
            py::set_error(domain_error, e.what());
        } catch (const DegenerateError& e) {
            py::set_error(degenerate_error, e.what());
        } catch (const NoRegionError& e) {
            py::set_error(no_region_error, e.what());
        } catch (const NoRootError& e) {
            py::set_error(no_root_error, e.what());
        } catch (const ConfigError& e) {
            py::set_error(config_error, e.what());
        }
    });

    // beliefs
    m.def(
        "belief_envelope",
        [](double p_t, double epsilon) {
            const auto env = belief_envelope(prob(p_t), epsilon);
            return py::make_tuple(env.l.value(), env.h.value());
        },
        py::arg("p_t"), py::arg("epsilon"), "Envelope (L, H) of beliefs around p_t.");
    m.def(
        "probability_to_woe", [](double p) { return probability_to_woe(prob(p)).bans; }, py::arg("p"));
    m.def(
        "woe_to_probability", [](double w) { return woe_to_probability({w}).value(); }, py::arg("bans"));

    // pricing
    m.def(
        "conditional_mean_seller_margin",
        [](double p_t, double epsilon, double w1) {
            return conditional_mean_seller_margin(prob(p_t), epsilon, WeightRule(w1));
        },
        py::arg("p_t"), py::arg("epsilon"), py::arg("w1") = 0.5);
    m.def(
        "seller_objective_margin", [](double p_t, double p_c) { return seller_objective_margin(prob(p_t), prob(p_c)); },
        py::arg("p_t"), py::arg("p_c"));
    m.def(
        "asymmetry_delta", [](double p_t, double iota) { return asymmetry_delta(prob(p_t), iota); }, py::arg("p_t"),
        py::arg("iota"));
    m.def(
        "net_asymmetry", [](double p_t, double iota) { return net_asymmetry(prob(p_t), iota); }, py::arg("p_t"),
        py::arg("iota"));

    // posterior
    py::class_<PosteriorDensity>(m, "PosteriorDensity")
        .def(py::init([](double p_c, double epsilon, const std::string& variant) {
                 return PosteriorDensity(prob(p_c), epsilon, parse_variant(variant));
             }),
             py::arg("p_c"), py::arg("epsilon"), py::arg("variant") = "basic")
        .def("__call__", &PosteriorDensity::operator(), py::arg("p_t"))
        .def("kernel", &PosteriorDensity::kernel, py::arg("p_t"))
        .def_property_readonly("support",
                               [](const PosteriorDensity& f) {
                                   return py::make_tuple(f.support_lo().value(), f.support_hi().value());
                               })
        .def_property_readonly("normalizer", &PosteriorDensity::normalizer)
        .def_property_readonly("mean", &PosteriorDensity::mean);

    // fairsolver
    m.def(
        "region",
        [](double p_c, double epsilon, const std::string& variant) {
            return std::string(to_string(region(parse_variant(variant), p_c, epsilon)));
        },
        py::arg("p_c"), py::arg("epsilon"), py::arg("variant") = "basic");
    m.def(
        "mean_margin",
        [](double p_c, double epsilon, double shift, const std::string& variant) {
            return evaluation_dict(mean_margin(parse_variant(variant), prob(p_c), epsilon, shift));
        },
        py::arg("p_c"), py::arg("epsilon"), py::arg("m") = 0.0, py::arg("variant") = "basic");
    m.def(
        "quadrature_mean_margin",
        [](double p_c, double epsilon, double shift, const std::string& variant) {
            return quadrature_mean_margin(prob(p_c), epsilon, shift, parse_variant(variant));
        },
        py::arg("p_c"), py::arg("epsilon"), py::arg("m") = 0.0, py::arg("variant") = "basic");
    m.def(
        "solve_adjustment",
        [](double p_c, double epsilon, const std::string& variant) {
            return adjustment_dict(solve_adjustment(parse_variant(variant), prob(p_c), epsilon));
        },
        py::arg("p_c"), py::arg("epsilon"), py::arg("variant") = "basic",
        "Shift m with zero expected seller margin at odds 1/(p_c + m).");
    m.def(
        "solve_w1_star",
        [](double p_t, double epsilon) {
            const auto s = solve_w1_star(prob(p_t), epsilon);
            py::dict d;
            d["w1"] = s.w1;
            d["degenerate"] = s.degenerate;
            d["residual"] = s.residual;
            return d;
        },
        py::arg("p_t"), py::arg("epsilon"));

    // montecarlo
    m.def(
        "simulate",
        [](double epsilon, std::optional<double> p_t, double w1, const std::string& strategy,
           const std::string& strategy2, const std::string& adjust, std::uint64_t trials, std::uint64_t seed,
           unsigned threads, const std::string& variant) {
            const auto g = make_config(epsilon, p_t, w1, strategy, strategy2, adjust, trials, seed, threads);
            GameLedger ledger;
            {
                py::gil_scoped_release release;
                ledger = parse_variant(variant) == Variant::BasicGame ? simulate(g) : simulate_definetti(g);
            }
            return ledger_columns(ledger);
        },
        py::arg("epsilon"), py::arg("p_t") = py::none(), py::arg("w1") = 0.5, py::arg("strategy") = "always",
        py::arg("strategy2") = "always", py::arg("adjust") = "none", py::arg("trials") = 100000,
        py::arg("seed") = 1, py::arg("threads") = 0, py::arg("variant") = "basic",
        "Play the game and return the ledger as a dict of columns.");
    m.def(
        "conditioned_margin_mc",
        [](double p_t, double epsilon, double w1, std::uint64_t n, std::uint64_t seed) {
            MarginEstimate e;
            {
                py::gil_scoped_release release;
                e = conditioned_margin_mc(p_t, epsilon, WeightRule(w1), n, seed);
            }
            return py::make_tuple(e.mean, e.std_error);
        },
        py::arg("p_t"), py::arg("epsilon"), py::arg("w1") = 0.5, py::arg("n") = 1000000, py::arg("seed") = 1);

    // figures and verification
    m.def(
        "figure_series",
        [](int id, std::size_t points, std::vector<double> epsilons, double w1, std::vector<double> curves) {
            FigureGrid g;
            g.points = points;
            g.epsilons = std::move(epsilons);
            g.w1 = w1;
            g.curves = std::move(curves);
            return table_dict(figure_series(id, g));
        },
        py::arg("figure_id"), py::arg("points") = 99, py::arg("epsilons") = std::vector<double>{},
        py::arg("w1") = 0.5, py::arg("curves") = std::vector<double>{});
    m.def(
        "run_verification",
        [](std::vector<double> p_c_grid, std::vector<double> epsilon_grid, double abs_tol, double se_mult,
           std::uint64_t pair_draws, std::uint64_t game_trials, std::uint64_t seed) {
            VerifyOptions o;
            o.p_c_grid = std::move(p_c_grid);
            o.epsilon_grid = std::move(epsilon_grid);
            o.abs_tol = abs_tol;
            o.se_mult = se_mult;
            o.pair_draws = pair_draws;
            o.game_trials = game_trials;
            o.seed = seed;
            VerifyReport r;
            {
                py::gil_scoped_release release;
                r = run_verification(o);
            }
            return py::make_tuple(r.passed(), table_dict(r.to_table()));
        },
        py::arg("p_c_grid") = std::vector<double>{}, py::arg("epsilon_grid") = std::vector<double>{},
        py::arg("abs_tol") = 1e-6, py::arg("se_mult") = 3.0, py::arg("pair_draws") = 0,
        py::arg("game_trials") = 0, py::arg("seed") = 1,
        "Returns (passed, findings as a dict of columns).");
}
