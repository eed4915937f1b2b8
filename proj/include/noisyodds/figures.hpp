#pragma once

#include <cstddef>
#include <vector>

#include "noisyodds/table.hpp"

namespace noisyodds {

struct FigureGrid {
    /// Samples along the horizontal axis, spaced (i + 1) / (points + 1).
    std::size_t points = 99;
    /// Noise levels; empty selects the figure's own default set.
    std::vector<double> epsilons;
    /// Weight on the seller's belief (figure 3).
    double w1 = 0.5;
    /// Curve parameters: p_t for figure 2, p_c for figure 6. Empty selects defaults.
    std::vector<double> curves;
};

/// Figures with a data series: 1, 2, 3, 4, 6, 7, 8, 9.
const std::vector<int>& known_figures();

/// Data behind one figure. ConfigError for an unknown id or a bad grid.
///
///  1  envelope           p_t, epsilon, e, l, h
///  2  evidence density   p_t, epsilon, woe, pdf, cdf
///  3  seller margin      p_t, epsilon, w1, margin
///  4  equalising weight  p_t, epsilon, w1_star, degenerate
///  6  posterior of p_t   p_c, epsilon, p_t, density, kernel
///  7  basic game         p_c, epsilon, margin_m0, m, segment, m_source
///  8  fair odds          p_c, epsilon, m, odds_consensus, odds_fair
///  9  subject-weighted   p_c, epsilon, margin_m0, m, segment, m_source
Table figure_series(int figure_id, const FigureGrid& grid = {});

}  // namespace noisyodds
