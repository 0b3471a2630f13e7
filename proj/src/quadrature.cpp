#include "gaussolve/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "gaussolve/errors.hpp"

namespace gaussolve::quad {

namespace {

template <unsigned N>
Rule expand_boost_rule(double a, double b) {
    using G = boost::math::quadrature::gauss<double, N>;
    static_assert(N % 2 == 0, "odd rules carry a node at the centre");
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    Rule r;
    r.nodes.reserve(N);
    r.weights.reserve(N);
    // ascending order: negative half first
    for (std::size_t i = x.size(); i-- > 0;) {
        r.nodes.push_back(mid - half * x[i]);
        r.weights.push_back(half * w[i]);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        r.nodes.push_back(mid + half * x[i]);
        r.weights.push_back(half * w[i]);
    }
    return r;
}

void append(Rule& into, const Rule& from) {
    into.nodes.insert(into.nodes.end(), from.nodes.begin(), from.nodes.end());
    into.weights.insert(into.weights.end(), from.weights.begin(), from.weights.end());
}

}  // namespace

Rule gauss_legendre(int n, double a, double b) {
    switch (n) {
        case 4: return expand_boost_rule<4>(a, b);
        case 8: return expand_boost_rule<8>(a, b);
        case 16: return expand_boost_rule<16>(a, b);
        case 32: return expand_boost_rule<32>(a, b);
        default: throw DomainError("gauss_legendre: supported point counts are 4, 8, 16, 32");
    }
}

std::size_t PanelLayout::node_count() const noexcept {
    const auto geo = static_cast<std::size_t>(levels + 1) * static_cast<std::size_t>(level_points);
    const auto uni = static_cast<std::size_t>(fine_panels - 1 + coarse_panels) *
                     static_cast<std::size_t>(panel_points);
    return geo + uni;
}

Rule graded_panels(double x_max, const PanelLayout& layout) {
    if (!(x_max > 0.0)) throw DomainError("graded_panels: x_max must be positive");
    if (layout.levels < 0 || layout.fine_panels < 1 || layout.coarse_panels < 0)
        throw DomainError("graded_panels: invalid panel counts");
    const double split = layout.coarse_panels > 0 ? layout.split : x_max;
    if (!(split > 0.0) || split > x_max) throw DomainError("graded_panels: split outside (0, x_max]");

    const double w = split / layout.fine_panels;
    Rule rule;
    rule.nodes.reserve(layout.node_count());
    rule.weights.reserve(layout.node_count());

    double lo = w;
    for (int k = 0; k < layout.levels; ++k) lo *= 0.5;
    append(rule, gauss_legendre(layout.level_points, 0.0, lo));
    for (int k = layout.levels; k > 0; --k) {
        append(rule, gauss_legendre(layout.level_points, lo, 2.0 * lo));
        lo *= 2.0;
    }
    for (int p = 1; p < layout.fine_panels; ++p)
        append(rule, gauss_legendre(layout.panel_points, p * w, (p + 1 == layout.fine_panels) ? split : (p + 1) * w));
    if (layout.coarse_panels > 0) {
        const double wc = (x_max - split) / layout.coarse_panels;
        for (int p = 0; p < layout.coarse_panels; ++p)
            append(rule, gauss_legendre(layout.panel_points, split + p * wc,
                                        (p + 1 == layout.coarse_panels) ? x_max : split + (p + 1) * wc));
    }
    return rule;
}

Rule transformed_midpoint(double x_max, std::size_t n) {
    if (!(x_max > 0.0) || n == 0) throw DomainError("transformed_midpoint: need x_max > 0 and n > 0");
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double dy = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double y = (static_cast<double>(k) + 0.5) * dy;
        rule.nodes[k] = x_max * y * y;
        rule.weights[k] = 2.0 * x_max * y * dy;
    }
    return rule;
}

}  // namespace gaussolve::quad
