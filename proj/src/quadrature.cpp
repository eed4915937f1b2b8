#include "noisyodds/quadrature.hpp"

#include <algorithm>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace noisyodds {

double integrate(const std::function<double(double)>& f, double a, double b, std::span<const double> breakpoints,
                 double relative_tolerance)
{
    if (!(a < b)) {
        return 0.0;
    }
    std::vector<double> edges{a};
    for (double x : breakpoints) {
        if (x > a && x < b) {
            edges.push_back(x);
        }
    }
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double error = 0.0;
        total += Rule::integrate(f, edges[i], edges[i + 1], 15, relative_tolerance, &error);
    }
    return total;
}

}  // namespace noisyodds
