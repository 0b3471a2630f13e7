// greens.hpp: retarded amplitude u(t) and thermal fluctuation v(t)
//
//   du/dt = -i omega0 u(t) - int_0^t g(t - tau) u(tau) dtau,   u(0) = 1
//   v(t)  = int_0^t int_0^t u(t - t1) g~(t1 - t2) u*(t - t2) dt1 dt2
//
// The kernels depend only on the lag, so u is a one-argument series.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "gaussolve/bath.hpp"

namespace gaussolve::greens {

using cplx = std::complex<double>;

struct TimeGrid {
    double t_max{20.0};
    std::size_t n_steps{4000};
    double h{0.005};
    std::size_t decimation{20};

    // h is snapped to t_max / n_steps; the requested step must divide t_max
    // to within 1e-9 relative.
    static TimeGrid from_step(double t_max, double h, std::size_t decimation);
    static TimeGrid from_steps(double t_max, std::size_t n_steps, std::size_t decimation);

    // Structural invariants always; h <= 0.1/omega_c only when strict.
    void validate(double omega_c, bool strict_resolution = true) const;
    bool resolves_cutoff(double omega_c) const noexcept { return h <= 0.1 / omega_c * (1.0 + 1e-12); }

    std::size_t output_count() const noexcept { return n_steps / decimation + 1; }
    double output_step() const noexcept { return h * static_cast<double>(decimation); }
    double time(std::size_t k) const noexcept { return static_cast<double>(k) * h; }
    double output_time(std::size_t m) const noexcept { return static_cast<double>(m * decimation) * h; }
    std::vector<double> output_times() const;
};

struct AmplitudeSeries {
    std::vector<cplx> u;      // full grid
    std::vector<cplx> u_dot;  // right-hand side at each accepted step
};

struct GreensSolution {
    TimeGrid grid;
    std::vector<cplx> u;
    std::vector<cplx> u_dot;
    std::vector<double> v;      // decimated output grid
    std::vector<double> v_dot;  // decimated output grid

    cplx u_out(std::size_t m) const { return u[m * grid.decimation]; }
    cplx u_dot_out(std::size_t m) const { return u_dot[m * grid.decimation]; }
};

// Two-step Adams-Bashforth predictor + trapezoidal corrector (PECE), memory
// integral by the trapezoid rule over the stored history. The scheme runs in
// the frame rotating at omega0, so the uncoupled oscillation is exact. Throws
// NumericalError when |u| exceeds 1 + instability_tol.
AmplitudeSeries solve_u(const bath::BathSpec& bath, const TimeGrid& grid, double instability_tol = 1e-4);

// Double trapezoid sum at each decimated output time. `kernel` must be
// tabulated with step grid.h for at least n_steps + 1 lags.
std::vector<double> compute_v(const TimeGrid& grid, std::span<const cplx> u, const bath::ThermalKernelGrid& kernel);
std::vector<double> compute_v(const bath::BathSpec& bath, const bath::QuadratureSpec& quad, const TimeGrid& grid,
                              std::span<const cplx> u);

// Derivative of the decimated v series (three-point differences).
std::vector<double> v_dot(std::span<const double> v, const TimeGrid& grid);

// solve_u + thermal kernel + compute_v + v_dot.
GreensSolution solve(const bath::BathSpec& bath, const TimeGrid& grid, const bath::QuadratureSpec& quad);

}  // namespace gaussolve::greens
