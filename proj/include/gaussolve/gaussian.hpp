// gaussian.hpp: single-mode Gaussian states, covariance propagation, coherence
//
// Quadratures x = a + a^dagger, p = -i(a - a^dagger): the vacuum has unit
// variance and a physical covariance matrix has nu = sqrt(det V) >= 1.
// Squeezing follows the Bogoliubov relation S^dagger a S = a cosh r - a^dagger sinh r,
// i.e. S(r) = exp[(r/2)(a^2 - a^dagger^2)], so a squeezed vacuum has
// Var(a) = -cosh r sinh r and quadrature variances e^{-2r}, e^{2r}.

#pragma once

#include <array>
#include <complex>

namespace gaussolve::gaussian {

using cplx = std::complex<double>;

struct StateSpec {
    cplx alpha{0.0, 0.0};  // displacement
    double r{0.0};         // squeezing

    static StateSpec vacuum() { return {}; }
    static StateSpec coherent(cplx alpha) { return {alpha, 0.0}; }
    static StateSpec squeezed(double r) { return {{0.0, 0.0}, r}; }
};

struct InitialMoments {
    cplx mean_a{0.0, 0.0};  // <a(0)>
    cplx var_a{0.0, 0.0};   // <a^2> - <a>^2; Var(a^dagger) is its conjugate
    double cov_na{0.0};     // <a^dagger a> - |<a>|^2

    double mean_number() const noexcept { return cov_na + std::norm(mean_a); }
};

struct CovarianceMatrix {
    double v11{1.0};
    double v22{1.0};
    double v12{0.0};
    std::array<double, 2> mean_xi{0.0, 0.0};

    double determinant() const noexcept { return v11 * v22 - v12 * v12; }
    // Symplectic eigenvalue sqrt(det V).
    double nu() const;
};

// Tolerance on nu >= 1 used by every physicality check.
inline constexpr double kPhysicalityTol = 1e-6;

InitialMoments initial_moments(const StateSpec& state);

// Covariance of the evolved state given the propagator amplitude u(t) and
// thermal fluctuation v(t). Throws PhysicalityError when nu < 1 - tol.
CovarianceMatrix covariance_at(const InitialMoments& m, cplx u, double v);

// <a^dagger(t) a(t)> = |u|^2 <a^dagger a>(0) + v.
double mean_number(const InitialMoments& m, cplx u, double v);

// Relative entropy of coherence in bits, measured against the thermal state
// with the same mean number. Clamped at 0 within -1e-9.
double coherence(const CovarianceMatrix& cov, double nbar);

// Unclamped value of the same expression, for diagnostics.
double coherence_unclamped(double nu, double nbar);

// Gaussian Wigner function with covariance V and mean mean_xi.
double wigner(const CovarianceMatrix& cov, std::array<double, 2> xi);

}  // namespace gaussolve::gaussian
