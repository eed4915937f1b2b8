#pragma once

#include <functional>
#include <span>

namespace noisyodds {

/// Adaptive Gauss-Kronrod (61-point) integration of f over [a, b], split at
/// every interior breakpoint so that each panel sees a smooth integrand.
/// Either end may be infinite.
double integrate(const std::function<double(double)>& f, double a, double b, std::span<const double> breakpoints = {},
                 double relative_tolerance = 1e-12);

}  // namespace noisyodds
