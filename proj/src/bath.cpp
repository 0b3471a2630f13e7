#include "gaussolve/bath.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gaussolve/errors.hpp"

namespace gaussolve::bath {

namespace {

constexpr int kLevelPoints = 8;
constexpr int kLevels = 40;
constexpr int kPanelPoints = 16;

quad::Rule frequency_rule(const QuadratureSpec& q, std::size_t n_nodes) {
    if (q.scheme == QuadratureScheme::TransformedTrapezoid)
        return quad::transformed_midpoint(q.omega_max, n_nodes);
    quad::PanelLayout layout;
    layout.levels = kLevels;
    layout.level_points = kLevelPoints;
    layout.panel_points = kPanelPoints;
    const long geo = static_cast<long>(kLevels + 1) * kLevelPoints;
    const long rest = (static_cast<long>(n_nodes) - geo) / kPanelPoints;
    layout.fine_panels = 1 + static_cast<int>(std::max(1L, rest));
    return quad::graded_panels(q.omega_max, layout);
}

cplx sum_oscillatory(const quad::Rule& r, double dt) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < r.size(); ++i) acc += r.weights[i] * std::polar(1.0, -r.nodes[i] * dt);
    return acc;
}

}  // namespace

void BathSpec::validate() const {
    std::ostringstream msg;
    if (!(s > 0.0)) msg << "s must be > 0 (got " << s << "); ";
    if (!(omega_c > 0.0)) msg << "omega_c must be > 0 (got " << omega_c << "); ";
    if (!(eta >= 0.0)) msg << "eta must be >= 0 (got " << eta << "); ";
    if (!(T_s >= 0.0)) msg << "T_s must be >= 0 (got " << T_s << "); ";
    if (!(omega0 > 0.0)) msg << "omega0 must be > 0 (got " << omega0 << "); ";
    if (!std::isfinite(eta) || !std::isfinite(T_s) || !std::isfinite(s) || !std::isfinite(omega_c))
        msg << "bath parameters must be finite; ";
    if (!msg.str().empty()) throw DomainError("BathSpec: " + msg.str());
}

BathSpec BathSpec::with_relative_coupling(double eta_over_eta_c, double s, double omega_c, double T_s,
                                          double omega0) {
    BathSpec b;
    b.s = s;
    b.omega_c = omega_c;
    b.T_s = T_s;
    b.omega0 = omega0;
    b.eta = eta_over_eta_c * critical_coupling(s, omega_c, omega0);
    b.validate();
    return b;
}

double BathSpec::eta_over_eta_c() const { return eta / critical_coupling(s, omega_c, omega0); }

QuadratureSpec QuadratureSpec::defaults_for(const BathSpec& bath) {
    QuadratureSpec q;
    q.omega_max = 10.0 * bath.omega_c;
    return q;
}

void QuadratureSpec::validate(const BathSpec& bath) const {
    if (!(omega_max >= 8.0 * bath.omega_c))
        throw DomainError("QuadratureSpec: omega_max must be >= 8 omega_c");
    if (n_nodes < 64) throw DomainError("QuadratureSpec: n_nodes must be >= 64");
}

double spectral_density(const BathSpec& bath, double omega) {
    if (omega < 0.0 || std::isnan(omega)) throw DomainError("spectral_density: omega must be >= 0");
    if (omega == 0.0) return 0.0;
    return bath.eta * omega * std::pow(omega / bath.omega_c, bath.s - 1.0) * std::exp(-omega / bath.omega_c);
}

double critical_coupling(double s, double omega_c, double omega0) {
    if (!(s > 0.0)) throw DomainError("critical_coupling: s must be > 0");
    if (!(omega_c > 0.0)) throw DomainError("critical_coupling: omega_c must be > 0");
    return omega0 / (omega_c * std::tgamma(s));
}

cplx memory_kernel(const BathSpec& bath, double dt) {
    const double scale = bath.eta * bath.omega_c * bath.omega_c * std::tgamma(bath.s + 1.0);
    return scale * std::pow(cplx{1.0, bath.omega_c * dt}, -(bath.s + 1.0));
}

double bose_occupation(double omega, double T_s) {
    if (!(omega > 0.0)) throw DomainError("bose_occupation: omega must be > 0");
    if (T_s < 0.0) throw DomainError("bose_occupation: T_s must be >= 0");
    if (T_s == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / T_s);
}

quad::Rule thermal_rule(const BathSpec& bath, const QuadratureSpec& quad) {
    quad::Rule r = frequency_rule(quad, quad.n_nodes);
    for (std::size_t i = 0; i < r.size(); ++i)
        r.weights[i] *= spectral_density(bath, r.nodes[i]) * bose_occupation(r.nodes[i], bath.T_s);
    return r;
}

cplx thermal_kernel(const BathSpec& bath, const QuadratureSpec& quad, double dt) {
    if (bath.T_s == 0.0 || bath.eta == 0.0) return {0.0, 0.0};
    return sum_oscillatory(thermal_rule(bath, quad), dt);
}

ThermalKernelGrid ThermalKernelGrid::build(const BathSpec& bath, const QuadratureSpec& quad, double h,
                                           std::size_t n_max, double tolerance) {
    bath.validate();
    quad.validate(bath);
    ThermalKernelGrid g;
    g.h_ = h;
    g.values_.assign(n_max + 1, cplx{0.0, 0.0});
    if (bath.T_s == 0.0 || bath.eta == 0.0) return g;
    g.zero_ = false;

    const quad::Rule rule = thermal_rule(bath, quad);
    for (std::size_t k = 0; k <= n_max; ++k) g.values_[k] = sum_oscillatory(rule, static_cast<double>(k) * h);

    QuadratureSpec fine = quad;
    fine.n_nodes = 2 * quad.n_nodes;
    const quad::Rule rule2 = thermal_rule(bath, fine);
    const double scale = std::abs(g.values_[0]);
    const double t_far = static_cast<double>(n_max) * h;
    const double shift0 = std::abs(sum_oscillatory(rule2, 0.0) - g.values_[0]) / scale;
    const double shift1 = std::abs(sum_oscillatory(rule2, t_far) - g.values_[n_max]) / scale;
    g.shift_ = std::max(shift0, shift1);
    if (!(g.shift_ <= tolerance)) {
        std::ostringstream msg;
        msg << "thermal kernel quadrature not converged: node doubling shifts g~ by " << g.shift_
            << " (relative to |g~(0)| = " << scale << ") at lags {0, " << t_far << "}; n_nodes = " << quad.n_nodes
            << ", omega_max = " << quad.omega_max << ". Increase quadrature.n_nodes.";
        throw NumericalError(msg.str());
    }
    return g;
}

cplx ThermalKernelGrid::at(long k) const {
    if (k >= 0) return values_.at(static_cast<std::size_t>(k));
    return std::conj(values_.at(static_cast<std::size_t>(-k)));
}

}  // namespace gaussolve::bath
