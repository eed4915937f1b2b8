#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "noisyodds/errors.hpp"
#include "noisyodds/figures.hpp"
#include "noisyodds/table.hpp"

using namespace noisyodds;

namespace {

double num(const Cell& c)
{
    return std::get<double>(c);
}

std::size_t column(const Table& t, const std::string& name)
{
    const auto it = std::find(t.columns.begin(), t.columns.end(), name);
    REQUIRE(it != t.columns.end());
    return static_cast<std::size_t>(it - t.columns.begin());
}

}  // namespace

TEST_SUITE("figures") {
    TEST_CASE("table formatting") {
        CHECK(format_double(0.1) == "0.10000000000000001");
        CHECK(format_double(2.0) == "2");
        Table t{{"a", "b", "c"}, {}};
        t.add_row({1.5, std::int64_t{2}, std::string("x")});
        CHECK_THROWS_AS(t.add_row({1.0}), std::logic_error);
        std::ostringstream out;
        t.write_csv(out);
        CHECK(out.str() == "a,b,c\n1.5,2,x\n");
    }

    TEST_CASE("every known figure produces rows") {
        FigureGrid g;
        g.points = 9;
        for (int id : known_figures()) {
            CAPTURE(id);
            const Table t = figure_series(id, g);
            CHECK_FALSE(t.rows.empty());
            for (const auto& row : t.rows) {
                REQUIRE(row.size() == t.columns.size());
            }
        }
        CHECK_THROWS_AS(figure_series(5, g), ConfigError);
        CHECK_THROWS_AS(figure_series(10, g), ConfigError);
        g.points = 0;
        CHECK_THROWS_AS(figure_series(1, g), ConfigError);
    }

    TEST_CASE("envelope endpoints at full noise") {
        FigureGrid g;
        g.points = 1;  // axis 0, 0.5, 1
        g.epsilons = {1.0};
        const Table t = figure_series(1, g);
        const auto p = column(t, "p_t"), l = column(t, "l"), h = column(t, "h");
        bool found = false;
        for (const auto& row : t.rows) {
            if (num(row[p]) == 0.5) {
                CHECK(num(row[l]) == 0.0);
                CHECK(num(row[h]) == 1.0);
                found = true;
            }
        }
        CHECK(found);
    }

    TEST_CASE("seller margin series is flat below one half") {
        FigureGrid g;
        g.points = 19;
        g.epsilons = {0.6};
        const Table t = figure_series(3, g);
        const auto p = column(t, "p_t"), m = column(t, "margin");
        double lo = 1e300, hi = -1e300;
        for (const auto& row : t.rows) {
            if (num(row[p]) < 0.5) {
                lo = std::min(lo, num(row[m]));
                hi = std::max(hi, num(row[m]));
            }
        }
        CHECK(hi - lo < 1e-9);
    }

    TEST_CASE("basic adjustment series crosses zero at even odds") {
        FigureGrid g;
        g.points = 9;  // includes p_c = 0.5
        g.epsilons = {0.5};
        const Table t = figure_series(7, g);
        const auto c = column(t, "p_c"), m = column(t, "m"), m0 = column(t, "margin_m0");
        for (const auto& row : t.rows) {
            const double pc = num(row[c]);
            if (pc == 0.5) {
                CHECK(std::fabs(num(row[m])) < 1e-12);
                CHECK(std::fabs(num(row[m0])) < 1e-12);
            } else {
                CHECK((num(row[m]) > 0.0) == (pc < 0.5));
            }
        }
    }

    TEST_CASE("fair odds series") {
        FigureGrid g;
        g.points = 9;
        g.epsilons = {0.5};
        const Table t = figure_series(8, g);
        const auto c = column(t, "p_c"), m = column(t, "m"), fair = column(t, "odds_fair");
        for (const auto& row : t.rows) {
            CHECK(num(row[fair]) == doctest::Approx(1.0 / (num(row[c]) + num(row[m]))));
        }
    }
}
