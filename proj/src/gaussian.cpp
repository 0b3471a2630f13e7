#include "gaussolve/gaussian.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gaussolve/errors.hpp"

namespace gaussolve::gaussian {

namespace {

// x log2 x with the x -> 0 limit.
double xlog2x(double x) { return x < 1e-12 ? 0.0 : x * std::log2(x); }

void require_physical(double nu, const char* where) {
    if (!(nu >= 1.0 - kPhysicalityTol)) {
        std::ostringstream msg;
        msg << where << ": symplectic eigenvalue nu = " << nu
            << " < 1 violates the uncertainty relation (inaccurate u or v upstream)";
        throw PhysicalityError(msg.str());
    }
}

}  // namespace

double CovarianceMatrix::nu() const {
    const double det = determinant();
    return det > 0.0 ? std::sqrt(det) : 0.0;
}

InitialMoments initial_moments(const StateSpec& state) {
    InitialMoments m;
    m.mean_a = state.alpha;
    m.var_a = cplx{-std::cosh(state.r) * std::sinh(state.r), 0.0};
    const double sh = std::sinh(state.r);
    m.cov_na = sh * sh;
    return m;
}

CovarianceMatrix covariance_at(const InitialMoments& m, cplx u, double v) {
    const double u2 = std::norm(u);
    const cplx z = u * u * m.var_a;  // u^2 Var(a); (u*)^2 Var(a^dagger) = conj(z)
    const double base = 1.0 + 2.0 * v + 2.0 * u2 * m.cov_na;

    CovarianceMatrix c;
    c.v11 = base + 2.0 * z.real();
    c.v22 = base - 2.0 * z.real();
    // i conj(z) - i z = 2 Im z
    c.v12 = 2.0 * z.imag();
    const cplx mean = u * m.mean_a;
    c.mean_xi = {2.0 * mean.real(), 2.0 * mean.imag()};
    require_physical(c.nu(), "covariance_at");
    return c;
}

double mean_number(const InitialMoments& m, cplx u, double v) { return std::norm(u) * m.mean_number() + v; }

double coherence_unclamped(double nu, double nbar) {
    const double lo = 0.5 * (nu - 1.0);
    const double hi = 0.5 * (nu + 1.0);
    return xlog2x(lo) - xlog2x(hi) + xlog2x(nbar + 1.0) - xlog2x(nbar);
}

double coherence(const CovarianceMatrix& cov, double nbar) {
    double nu = cov.nu();
    require_physical(nu, "coherence");
    if (nbar < 0.0) throw DomainError("coherence: mean number must be >= 0");
    nu = std::max(nu, 1.0);
    const double c = coherence_unclamped(nu, nbar);
    if (c < -1e-9) {
        std::ostringstream msg;
        msg << "coherence: relative entropy " << c << " < 0; (nu = " << nu << ", nbar = " << nbar
            << ") is not a consistent Gaussian state";
        throw PhysicalityError(msg.str());
    }
    return std::max(c, 0.0);
}

double wigner(const CovarianceMatrix& cov, std::array<double, 2> xi) {
    const double det = cov.determinant();
    if (!(det >= 1e-12)) throw DomainError("wigner: covariance matrix is singular");
    const double dx = xi[0] - cov.mean_xi[0];
    const double dp = xi[1] - cov.mean_xi[1];
    // V^{-1} = [v22 -v12; -v12 v11] / det
    const double quad = (cov.v22 * dx * dx - 2.0 * cov.v12 * dx * dp + cov.v11 * dp * dp) / det;
    return std::exp(-0.5 * quad) / (2.0 * std::numbers::pi * std::sqrt(det));
}

}  // namespace gaussolve::gaussian
