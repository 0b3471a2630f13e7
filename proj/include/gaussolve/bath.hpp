// bath.hpp: Ohmic-family reservoir: spectral density, memory and thermal kernels
//
// Units: hbar = k_B = 1, frequencies in units of the system frequency, and
// the temperature is the scaled T_s = k_B T / (hbar omega0).

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "gaussolve/quadrature.hpp"

namespace gaussolve::bath {

using cplx = std::complex<double>;

struct BathSpec {
    double eta{0.0};      // coupling strength (absolute)
    double s{1.0};        // Ohmicity exponent: 1 Ohmic, <1 sub-Ohmic, >1 super-Ohmic
    double omega_c{5.0};  // cutoff frequency
    double T_s{0.0};      // scaled temperature
    double omega0{1.0};   // system frequency

    // Throws DomainError when any invariant is violated.
    void validate() const;

    // Coupling expressed as a multiple of the critical coupling.
    static BathSpec with_relative_coupling(double eta_over_eta_c, double s, double omega_c,
                                           double T_s, double omega0 = 1.0);
    double eta_over_eta_c() const;
};

enum class QuadratureScheme { TransformedTrapezoid, GaussLegendrePanels };

struct QuadratureSpec {
    double omega_max{50.0};  // upper truncation of frequency integrals
    std::size_t n_nodes{1024};
    QuadratureScheme scheme{QuadratureScheme::GaussLegendrePanels};

    // omega_max = 10 omega_c, 1024 nodes on graded Gauss-Legendre panels.
    static QuadratureSpec defaults_for(const BathSpec& bath);
    void validate(const BathSpec& bath) const;
};

// J(omega) = eta omega^s omega_c^(1-s) exp(-omega/omega_c), omega >= 0.
double spectral_density(const BathSpec& bath, double omega);

// eta_c = omega0 / (omega_c Gamma(s)).
double critical_coupling(double s, double omega_c, double omega0 = 1.0);

// g(dt) = int_0^inf J(w) e^{-i w dt} dw = eta omega_c^2 Gamma(s+1) (1 + i omega_c dt)^{-(s+1)}.
cplx memory_kernel(const BathSpec& bath, double dt);

// 1 / (e^{omega/T_s} - 1); 0 at T_s = 0. omega must be positive.
double bose_occupation(double omega, double T_s);

// Nodes and combined weights w_i J(omega_i) nbar(omega_i) of the thermal integrand.
quad::Rule thermal_rule(const BathSpec& bath, const QuadratureSpec& quad);

// g~(dt) = int_0^omega_max J(w) nbar(w) e^{-i w dt} dw by quadrature.
cplx thermal_kernel(const BathSpec& bath, const QuadratureSpec& quad, double dt);

// g~ tabulated on k*h, k = 0..n_max. Immutable after construction.
class ThermalKernelGrid {
public:
    ThermalKernelGrid() = default;

    // Checks convergence by re-evaluating the extreme lags with twice the
    // nodes; throws NumericalError if the relative shift exceeds tolerance.
    static ThermalKernelGrid build(const BathSpec& bath, const QuadratureSpec& quad, double h,
                                   std::size_t n_max, double tolerance = 1e-6);

    double step() const noexcept { return h_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool is_zero() const noexcept { return zero_; }
    const std::vector<cplx>& values() const noexcept { return values_; }
    // Lag index may be negative; uses g~(-dt) = conj(g~(dt)).
    cplx at(long k) const;
    // Relative shift observed under node doubling.
    double convergence_shift() const noexcept { return shift_; }

private:
    double h_{0.0};
    bool zero_{true};
    double shift_{0.0};
    std::vector<cplx> values_;
};

}  // namespace gaussolve::bath
