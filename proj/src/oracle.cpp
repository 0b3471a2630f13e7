#include "gaussolve/oracle.hpp"

#include <cmath>
#include <sstream>

#include "gaussolve/errors.hpp"
#include "gaussolve/quadrature.hpp"

namespace gaussolve::oracle {

namespace {

constexpr int kGradedPoints = 8;
constexpr int kGradedLevels = 16;
constexpr double kFineFraction = 0.6;  // share of the uniform panels below the split
constexpr double kSplitOverCutoff = 3.0;

quad::Rule graded_rule(const bath::BathSpec& bath, std::size_t N, double omega_max) {
    const long panels = static_cast<long>(N / kGradedPoints);
    if (N % kGradedPoints != 0 || panels < kGradedLevels + 4) {
        std::ostringstream msg;
        msg << "discretize: graded sampling needs N a multiple of " << kGradedPoints << " and >= "
            << kGradedPoints * (kGradedLevels + 4) << " (got " << N << ")";
        throw DomainError(msg.str());
    }
    quad::PanelLayout layout;
    layout.levels = kGradedLevels;
    layout.level_points = kGradedPoints;
    layout.panel_points = kGradedPoints;
    const long uniform = panels - kGradedLevels;
    layout.fine_panels = static_cast<int>(std::lround(kFineFraction * static_cast<double>(uniform)));
    layout.coarse_panels = static_cast<int>(uniform - layout.fine_panels);
    layout.split = kSplitOverCutoff * bath.omega_c;
    if (!(layout.split < omega_max)) throw DomainError("discretize: omega_max must exceed 3 omega_c for graded sampling");
    return quad::graded_panels(omega_max, layout);
}

}  // namespace

DiscretizedBath discretize(const bath::BathSpec& bath, std::size_t N, double omega_max, Sampling sampling) {
    bath.validate();
    if (N < 2) throw DomainError("discretize: N must be >= 2");
    if (!(omega_max > 0.0)) throw DomainError("discretize: omega_max must be positive");

    DiscretizedBath db;
    db.omega0 = bath.omega0;
    db.N = N;
    db.omega_max = omega_max;
    db.delta_omega = omega_max / static_cast<double>(N);
    db.sampling = sampling;

    if (sampling == Sampling::Midpoint) {
        db.omegas.resize(N);
        db.weights.assign(N, db.delta_omega);
        for (std::size_t k = 0; k < N; ++k) db.omegas[k] = (static_cast<double>(k) + 0.5) * db.delta_omega;
    } else {
        quad::Rule r = graded_rule(bath, N, omega_max);
        db.omegas = std::move(r.nodes);
        db.weights = std::move(r.weights);
    }
    db.couplings.resize(N);
    for (std::size_t k = 0; k < N; ++k) db.couplings[k] = std::sqrt(bath::spectral_density(bath, db.omegas[k]) * db.weights[k]);
    return db;
}

Propagator::Propagator(const DiscretizedBath& db) : db_(db) {
    const auto n = static_cast<Eigen::Index>(db.N + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    H(0, 0) = db.omega0;
    for (Eigen::Index k = 1; k < n; ++k) {
        H(k, k) = db.omegas[static_cast<std::size_t>(k - 1)];
        H(0, k) = H(k, 0) = db.couplings[static_cast<std::size_t>(k - 1)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("oracle: eigendecomposition of the mode Hamiltonian failed");
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
    first_row_ = vectors_.row(0).transpose();
}

Eigen::VectorXcd Propagator::row(double t) const {
    if (!(t >= 0.0)) throw DomainError("oracle: t must be >= 0");
    // [e^{-iHt}]_{0j} = sum_n Q_0n e^{-i E_n t} Q_jn
    const Eigen::Index n = energies_.size();
    Eigen::VectorXd re(n), im(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        re[i] = first_row_[i] * std::cos(energies_[i] * t);
        im[i] = -first_row_[i] * std::sin(energies_[i] * t);
    }
    Eigen::VectorXcd out(n);
    out.real() = vectors_ * re;
    out.imag() = vectors_ * im;
    return out;
}

cplx Propagator::u(double t) const {
    if (!(t >= 0.0)) throw DomainError("oracle: t must be >= 0");
    cplx acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < energies_.size(); ++i)
        acc += first_row_[i] * first_row_[i] * std::polar(1.0, -energies_[i] * t);
    return acc;
}

double Propagator::v(double t, double T_s) const {
    if (T_s < 0.0) throw DomainError("oracle: T_s must be >= 0");
    if (T_s == 0.0) return 0.0;
    const Eigen::VectorXcd r = row(t);
    double acc = 0.0;
    for (std::size_t k = 0; k < db_.N; ++k)
        acc += std::norm(r[static_cast<Eigen::Index>(k + 1)]) * bath::bose_occupation(db_.omegas[k], T_s);
    return acc;
}

Eigen::VectorXcd propagator_row(const DiscretizedBath& db, double t) { return Propagator(db).row(t); }

cplx oracle_u(const DiscretizedBath& db, double t) { return Propagator(db).u(t); }

double oracle_v(const DiscretizedBath& db, double t, double T_s) { return Propagator(db).v(t, T_s); }

}  // namespace gaussolve::oracle
