#include "gaussolve/greens.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gaussolve/errors.hpp"
#include "gaussolve/numerics.hpp"

namespace gaussolve::greens {

TimeGrid TimeGrid::from_step(double t_max, double h, std::size_t decimation) {
    if (!(t_max > 0.0) || !(h > 0.0)) throw DomainError("TimeGrid: t_max and h must be positive");
    const double ratio = t_max / h;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(ratio - steps) > 1e-9 * ratio)
        throw DomainError("TimeGrid: h must divide t_max into an integer number of steps");
    return from_steps(t_max, static_cast<std::size_t>(steps), decimation);
}

TimeGrid TimeGrid::from_steps(double t_max, std::size_t n_steps, std::size_t decimation) {
    if (!(t_max > 0.0) || n_steps == 0) throw DomainError("TimeGrid: t_max and n_steps must be positive");
    TimeGrid g;
    g.t_max = t_max;
    g.n_steps = n_steps;
    g.h = t_max / static_cast<double>(n_steps);
    g.decimation = decimation;
    return g;
}

void TimeGrid::validate(double omega_c, bool strict_resolution) const {
    if (!(t_max > 0.0) || n_steps == 0 || !(h > 0.0)) throw DomainError("TimeGrid: empty grid");
    if (std::abs(static_cast<double>(n_steps) * h - t_max) > 1e-12 * t_max)
        throw DomainError("TimeGrid: n_steps * h must equal t_max");
    if (decimation < 1) throw DomainError("TimeGrid: decimation must be >= 1");
    if (n_steps % decimation != 0) throw DomainError("TimeGrid: decimation must divide n_steps");
    if (strict_resolution && !resolves_cutoff(omega_c)) {
        std::ostringstream msg;
        msg << "TimeGrid: h = " << h << " exceeds 0.1/omega_c = " << 0.1 / omega_c
            << "; the memory kernel is not resolved";
        throw DomainError(msg.str());
    }
}

std::vector<double> TimeGrid::output_times() const {
    std::vector<double> t(output_count());
    for (std::size_t m = 0; m < t.size(); ++m) t[m] = output_time(m);
    return t;
}

AmplitudeSeries solve_u(const bath::BathSpec& bath, const TimeGrid& grid, double instability_tol) {
    bath.validate();
    const std::size_t n = grid.n_steps;
    const double h = grid.h;
    const double w0 = bath.omega0;

    // Rotating frame w(t) = e^{i w0 t} u(t):
    //   dw/dt = -int_0^t k(t - tau) w(tau) dtau,  k(s) = g(s) e^{i w0 s}
    // so free evolution is exact and only the memory term is discretized.
    auto kernel = [&](double s) { return bath::memory_kernel(bath, s) * std::polar(1.0, w0 * s); };
    std::vector<cplx> k(n + 1);
    if (bath.eta > 0.0)
        for (std::size_t j = 0; j <= n; ++j) k[j] = kernel(grid.time(j));

    std::vector<cplx> w(n + 1), F(n + 1);
    w[0] = 1.0;
    F[0] = 0.0;

    // rhs at step m given the history part S of the memory sum and candidate w_m
    auto rhs = [&](const cplx& S, const cplx& wm) { return -h * (S + 0.5 * k[0] * wm); };

    for (std::size_t m = 0; m < n; ++m) {
        // history sum for step m+1: k(t_{m+1}) w_0 / 2 + sum_{j=1}^{m} k(t_{m+1-j}) w_j
        cplx S = 0.5 * k[m + 1] * w[0];
        for (std::size_t j = 1; j <= m; ++j) S += k[m + 1 - j] * w[j];

        cplx predicted;
        if (m == 0) {
            // two explicit-Euler half steps
            const double hh = 0.5 * h;
            const cplx w_half = w[0] + hh * F[0];
            const cplx F_half = bath.eta > 0.0 ? -hh * 0.5 * (kernel(hh) * w[0] + k[0] * w_half) : cplx{};
            predicted = w_half + hh * F_half;
        } else {
            predicted = w[m] + h * (1.5 * F[m] - 0.5 * F[m - 1]);
        }

        const cplx F_pred = rhs(S, predicted);
        w[m + 1] = w[m] + 0.5 * h * (F[m] + F_pred);
        F[m + 1] = rhs(S, w[m + 1]);

        const double mag = std::abs(w[m + 1]);
        if (!(mag <= 1.0 + instability_tol)) {
            std::ostringstream msg;
            msg << "solve_u: |u| = " << mag << " at t = " << grid.time(m + 1) << " exceeds 1 + " << instability_tol
                << "; the integrator is unstable at h = " << h << ", use a smaller step";
            throw NumericalError(msg.str());
        }
    }

    AmplitudeSeries out;
    out.u.resize(n + 1);
    out.u_dot.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
        const cplx rot = std::polar(1.0, -w0 * grid.time(j));
        out.u[j] = rot * w[j];
        out.u_dot[j] = cplx{0.0, -w0} * out.u[j] + rot * F[j];
    }
    return out;
}

std::vector<double> compute_v(const TimeGrid& grid, std::span<const cplx> u, const bath::ThermalKernelGrid& kernel) {
    if (u.size() != grid.n_steps + 1) throw DomainError("compute_v: u does not match the grid");
    if (kernel.size() < grid.n_steps + 1 || std::abs(kernel.step() - grid.h) > 1e-14 * grid.h)
        throw DomainError("compute_v: thermal kernel is not tabulated on the solver grid");

    const std::size_t m_count = grid.output_count();
    std::vector<double> v(m_count, 0.0);
    if (kernel.is_zero()) return v;

    const double h = grid.h;
    const auto& gt = kernel.values();
    std::vector<double> ar(grid.n_steps + 1), ai(grid.n_steps + 1);

    for (std::size_t m = 1; m < m_count; ++m) {
        const std::size_t n = m * grid.decimation;
        // a_j = w_j u(t_n - t_j), trapezoid weights
        for (std::size_t j = 0; j <= n; ++j) {
            const double w = (j == 0 || j == n) ? 0.5 * h : h;
            ar[j] = w * u[n - j].real();
            ai[j] = w * u[n - j].imag();
        }
        // v = sum_{j,l} a_j g~(t_j - t_l) conj(a_l) = Re g~_0 c_0 + 2 Re sum_{d>0} g~_d c_d,
        // c_d = sum_l a_{l+d} conj(a_l)
        double acc = 0.0;
        for (std::size_t d = 0; d <= n; ++d) {
            const std::size_t len = n - d + 1;
            const double* xr = ar.data() + d;
            const double* xi = ai.data() + d;
            double cr0 = 0, cr1 = 0, cr2 = 0, cr3 = 0, ci0 = 0, ci1 = 0, ci2 = 0, ci3 = 0;
            std::size_t l = 0;
            for (; l + 4 <= len; l += 4) {
                cr0 += xr[l] * ar[l] + xi[l] * ai[l];
                ci0 += xi[l] * ar[l] - xr[l] * ai[l];
                cr1 += xr[l + 1] * ar[l + 1] + xi[l + 1] * ai[l + 1];
                ci1 += xi[l + 1] * ar[l + 1] - xr[l + 1] * ai[l + 1];
                cr2 += xr[l + 2] * ar[l + 2] + xi[l + 2] * ai[l + 2];
                ci2 += xi[l + 2] * ar[l + 2] - xr[l + 2] * ai[l + 2];
                cr3 += xr[l + 3] * ar[l + 3] + xi[l + 3] * ai[l + 3];
                ci3 += xi[l + 3] * ar[l + 3] - xr[l + 3] * ai[l + 3];
            }
            for (; l < len; ++l) {
                cr0 += xr[l] * ar[l] + xi[l] * ai[l];
                ci0 += xi[l] * ar[l] - xr[l] * ai[l];
            }
            const double cr = (cr0 + cr1) + (cr2 + cr3);
            const double ci = (ci0 + ci1) + (ci2 + ci3);
            const double term = gt[d].real() * cr - gt[d].imag() * ci;
            acc += (d == 0) ? term : 2.0 * term;
        }
        v[m] = acc;
    }

    const double vmax = *std::max_element(v.begin(), v.end());
    const double floor = -1e-9 * std::max(1.0, vmax);
    for (std::size_t m = 0; m < m_count; ++m) {
        if (!std::isfinite(v[m]) || v[m] < floor) {
            std::ostringstream msg;
            msg << "compute_v: fluctuation v = " << v[m] << " at t = " << grid.output_time(m)
                << " is not a nonnegative real number";
            throw NumericalError(msg.str());
        }
        v[m] = std::max(v[m], 0.0);
    }
    return v;
}

std::vector<double> compute_v(const bath::BathSpec& bath, const bath::QuadratureSpec& quad, const TimeGrid& grid,
                              std::span<const cplx> u) {
    const auto kernel = bath::ThermalKernelGrid::build(bath, quad, grid.h, grid.n_steps);
    return compute_v(grid, u, kernel);
}

std::vector<double> v_dot(std::span<const double> v, const TimeGrid& grid) {
    if (v.size() < 3) throw DomainError("v_dot: need at least 3 output points");
    return num::gradient_uniform(v, grid.output_step());
}

GreensSolution solve(const bath::BathSpec& bath, const TimeGrid& grid, const bath::QuadratureSpec& quad) {
    bath.validate();
    grid.validate(bath.omega_c, false);
    quad.validate(bath);
    GreensSolution sol;
    sol.grid = grid;
    auto amp = solve_u(bath, grid);
    sol.u = std::move(amp.u);
    sol.u_dot = std::move(amp.u_dot);
    sol.v = compute_v(bath, quad, grid, sol.u);
    sol.v_dot = v_dot(sol.v, grid);
    // v >= 0 with v(0) = 0, so t = 0 is a minimum; the one-sided stencil would leave O(dt^2) there
    sol.v_dot[0] = 0.0;
    return sol;
}

}  // namespace gaussolve::greens
