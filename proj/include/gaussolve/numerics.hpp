// numerics.hpp: small finite-difference helpers

#pragma once

#include <span>
#include <vector>

namespace gaussolve::num {

// Three-point derivative of y(x) on a strictly increasing, possibly
// non-uniform grid: central differences in the interior, one-sided
// second-order formulas at the ends. Exact for quadratics. A NaN anywhere in
// a stencil yields NaN at that point. Needs at least 3 points.
std::vector<double> gradient(std::span<const double> y, std::span<const double> x);

// Same on a uniform grid of spacing dx.
std::vector<double> gradient_uniform(std::span<const double> y, double dx);

}  // namespace gaussolve::num
