// quadrature.hpp: composite Gauss-Legendre rules on (0, x_max]

#pragma once

#include <cstddef>
#include <vector>

namespace gaussolve::quad {

// A fixed rule: sum_i weights[i] * f(nodes[i]). Nodes are strictly positive.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }

    template <class F>
    auto integrate(F&& f) const {
        decltype(f(0.0)) sum{};
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

// Gauss-Legendre rule with n points mapped to [a, b]. n must be one of 4, 8, 16, 32.
Rule gauss_legendre(int n, double a, double b);

// Panel layout on (0, x_max]:
//
//   [0, split] is cut into `fine_panels` equal panels of width w; the first of
//   them, [0, w], is replaced by `levels` geometric panels [w/2^(k+1), w/2^k]
//   plus an innermost [0, w/2^levels], each with `level_points` nodes.
//   [split, x_max] is cut into `coarse_panels` equal panels.
//
// With coarse_panels == 0 the split is ignored and the fine region covers the
// whole interval. Geometric grading gives exponential convergence for
// integrands behaving like x^(s-1) at the origin.
struct PanelLayout {
    int levels{40};
    int level_points{8};
    int panel_points{16};
    int fine_panels{44};
    int coarse_panels{0};
    double split{0.0};

    std::size_t node_count() const noexcept;
};

Rule graded_panels(double x_max, const PanelLayout& layout);

// Midpoint rule on the substituted axis x = x_max * y^2, y in (0, 1]: turns an
// x^(s-1) endpoint behaviour into y^(2s-1).
Rule transformed_midpoint(double x_max, std::size_t n);

}  // namespace gaussolve::quad
