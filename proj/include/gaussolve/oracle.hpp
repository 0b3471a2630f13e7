// oracle.hpp: finite-mode reference for u(t) and v(t)
//
// The reservoir is replaced by N modes with couplings V_k = sqrt(J(omega_k) w_k),
// giving the (N+1)x(N+1) single-particle Hamiltonian
//
//   H = [[omega0, V^T], [V, diag(omega_k)]]
//
// whose propagator row 0 yields u(t) = [e^{-iHt}]_00 and
// v(t) = sum_k |[e^{-iHt}]_0k|^2 nbar(omega_k).

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "gaussolve/bath.hpp"

namespace gaussolve::oracle {

using cplx = std::complex<double>;

enum class Sampling {
    Midpoint,            // omega_k = (k - 1/2) d_omega, w_k = d_omega
    GaussLegendreGraded  // 8-point panels, geometric toward omega = 0
};

struct DiscretizedBath {
    std::vector<double> omegas;
    std::vector<double> weights;    // frequency measure of each mode
    std::vector<double> couplings;  // V_k >= 0
    double omega0{1.0};
    std::size_t N{0};
    double delta_omega{0.0};  // omega_max / N (the actual spacing for midpoint sampling)
    double omega_max{0.0};
    Sampling sampling{Sampling::Midpoint};
};

// Throws DomainError for N < 2, omega_max <= 0, or a graded layout that does
// not fit N (N must be a multiple of 8 and at least 160).
DiscretizedBath discretize(const bath::BathSpec& bath, std::size_t N, double omega_max,
                           Sampling sampling = Sampling::GaussLegendreGraded);

// One eigendecomposition of H, then cheap evaluation at any t.
class Propagator {
public:
    explicit Propagator(const DiscretizedBath& db);

    // Row 0 of e^{-iHt}, length N + 1.
    Eigen::VectorXcd row(double t) const;
    cplx u(double t) const;
    double v(double t, double T_s) const;

    const DiscretizedBath& bath() const noexcept { return db_; }

private:
    DiscretizedBath db_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXd vectors_;
    Eigen::VectorXd first_row_;  // vectors_.row(0)
};

Eigen::VectorXcd propagator_row(const DiscretizedBath& db, double t);
cplx oracle_u(const DiscretizedBath& db, double t);
double oracle_v(const DiscretizedBath& db, double t, double T_s);

}  // namespace gaussolve::oracle
