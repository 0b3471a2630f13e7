#include "gaussolve/master.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "gaussolve/errors.hpp"
#include "gaussolve/numerics.hpp"

namespace gaussolve::master {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

double interpolate(std::span<const double> y, std::span<const double> t, std::size_t i, double at) {
    const double f = (at - t[i]) / (t[i + 1] - t[i]);
    return y[i] + f * (y[i + 1] - y[i]);
}

}  // namespace

MasterCoefficients master_coefficients(const greens::GreensSolution& sol, double u_floor) {
    const std::size_t n = sol.grid.output_count();
    if (sol.v.size() != n || sol.v_dot.size() != n) throw DomainError("master_coefficients: incomplete solution");

    MasterCoefficients mc;
    mc.times = sol.grid.output_times();
    mc.omega_prime.assign(n, kNaN);
    mc.gamma.assign(n, kNaN);
    mc.gamma_tilde.assign(n, kNaN);
    mc.singular_mask.assign(n, false);

    std::size_t singular = 0;
    for (std::size_t m = 0; m < n; ++m) {
        const greens::cplx u = sol.u_out(m);
        if (std::abs(u) < u_floor) {
            mc.singular_mask[m] = true;
            ++singular;
            continue;
        }
        const greens::cplx ratio = sol.u_dot_out(m) / u;
        mc.omega_prime[m] = -ratio.imag();
        mc.gamma[m] = -ratio.real();
        mc.gamma_tilde[m] = sol.v_dot[m] - 2.0 * sol.v[m] * ratio.real();
    }
    if (singular == n) throw NumericalError("master_coefficients: |u| < u_floor at every output time");
    return mc;
}

std::vector<SignChange> detect_sign_changes(std::span<const double> series, std::span<const double> times) {
    if (series.size() != times.size()) throw DomainError("detect_sign_changes: length mismatch");
    std::vector<SignChange> out;
    std::optional<std::size_t> last;  // last finite nonzero sample with no gap since
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double y = series[i];
        if (std::isnan(y)) {
            last.reset();
            continue;
        }
        const int sg = sign_of(y);
        if (sg == 0) continue;
        if (last && sign_of(series[*last]) != sg) {
            const std::size_t p = *last;
            const Direction dir = sg < 0 ? Direction::Falling : Direction::Rising;
            if (i == p + 1) {
                const double t = times[p] + series[p] / (series[p] - y) * (times[i] - times[p]);
                out.push_back({t, dir, p});
            } else {
                out.push_back({0.5 * (times[p + 1] + times[i - 1]), dir, p});
            }
        }
        last = i;
    }
    return out;
}

CrossoverMap crossover_map(std::span<const double> eta_s, std::span<const double> times, const Table& coherence,
                           const Table& gamma) {
    const std::size_t ne = eta_s.size();
    const std::size_t nt = times.size();
    if (ne < 3 || nt < 3) throw DomainError("crossover_map: need at least 3 points per axis");
    for (const Table* tab : {&coherence, &gamma})
        if (tab->rows != ne || tab->cols != nt || tab->data.size() != ne * nt)
            throw DomainError("crossover_map: table shape does not match the axes");

    CrossoverMap map;
    map.eta_s.assign(eta_s.begin(), eta_s.end());
    map.times.assign(times.begin(), times.end());
    map.dgamma_dt = Table(ne, nt);
    map.dC_deta = Table(ne, nt);

    for (std::size_t i = 0; i < ne; ++i) {
        const auto d = num::gradient(gamma.row(i), times);
        std::copy(d.begin(), d.end(), map.dgamma_dt.data.begin() + static_cast<long>(i * nt));
    }
    std::vector<double> column(ne);
    for (std::size_t j = 0; j < nt; ++j) {
        for (std::size_t i = 0; i < ne; ++i) column[i] = coherence(i, j);
        const auto d = num::gradient(column, eta_s);
        for (std::size_t i = 0; i < ne; ++i) map.dC_deta(i, j) = d[i];
    }

    // roundoff-level values (free evolution gives |gamma| ~ 1e-17) count as zero
    auto snapped = [](std::span<const double> y) {
        std::vector<double> out(y.begin(), y.end());
        for (double& x : out)
            if (std::abs(x) <= kZeroFloor) x = 0.0;
        return out;
    };
    for (std::size_t i = 0; i < ne; ++i) {
        const auto g = snapped(gamma.row(i));
        const auto slope = snapped(map.dgamma_dt.row(i));
        const auto slope_changes = detect_sign_changes(slope, times);
        const auto gamma_changes = detect_sign_changes(g, times);
        for (std::size_t k = 0; k < slope_changes.size(); ++k) {
            const auto& flip = slope_changes[k];
            if (flip.direction != Direction::Falling) continue;
            map.slope_flips.push_back({eta_s[i], flip.t, Direction::Falling, kNaN});

            const double g_at = interpolate(g, times, flip.index, flip.t);
            if (!(g_at > 0.0)) continue;
            double until = std::numeric_limits<double>::infinity();
            for (std::size_t q = k + 1; q < slope_changes.size(); ++q)
                if (slope_changes[q].direction == Direction::Rising) {
                    until = slope_changes[q].t;
                    break;
                }
            for (const auto& gc : gamma_changes)
                if (gc.direction == Direction::Falling && gc.t > flip.t && gc.t < until) {
                    map.boundary.push_back({eta_s[i], flip.t, Direction::Falling, gc.t});
                    break;
                }
        }
    }
    return map;
}

}  // namespace gaussolve::master
