#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "gaussolve/errors.hpp"
#include "gaussolve/gaussian.hpp"

using namespace gaussolve;
using cplx = std::complex<double>;

namespace {

// Truncated Fock space: annihilation operator and Gaussian unitaries.
struct Fock {
    int dim;
    Eigen::MatrixXcd a;

    explicit Fock(int d) : dim(d), a(Eigen::MatrixXcd::Zero(d, d)) {
        for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    Eigen::MatrixXcd ad() const { return a.adjoint(); }
    Eigen::MatrixXcd displace(cplx alpha) const { return (alpha * ad() - std::conj(alpha) * a).exp(); }
    Eigen::MatrixXcd squeeze(double r) const { return (0.5 * r * (a * a - ad() * ad())).exp(); }
    Eigen::MatrixXcd thermal(double n0) const {
        Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
        for (int n = 0; n < dim; ++n) rho(n, n) = std::pow(n0, n) / std::pow(n0 + 1.0, n + 1);
        return rho;
    }
    cplx expect(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& op) const { return (rho * op).trace(); }
};

double entropy_bits(const Eigen::MatrixXcd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()[i];
        if (p > 1e-15) s -= p * std::log2(p);
    }
    return s;
}

double thermal_entropy_bits(double n) {
    return (n + 1.0) * std::log2(n + 1.0) - (n > 0.0 ? n * std::log2(n) : 0.0);
}

}  // namespace

TEST_CASE("initial moments match the Fock-space state") {
    const Fock f(64);
    for (auto [alpha, r] : {std::pair<cplx, double>{{1.0, 0.0}, 0.0}, {{0.3, -0.7}, 0.5}, {{0.0, 0.0}, 0.8}}) {
        Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(f.dim);
        vac[0] = 1.0;
        const Eigen::VectorXcd psi = f.displace(alpha) * f.squeeze(r) * vac;
        const Eigen::MatrixXcd rho = psi * psi.adjoint();
        const cplx ea = f.expect(rho, f.a);
        const cplx ea2 = f.expect(rho, f.a * f.a);
        const double n = f.expect(rho, f.ad() * f.a).real();

        const auto m = gaussian::initial_moments({alpha, r});
        CHECK(std::abs(m.mean_a - ea) < 1e-10);
        CHECK(std::abs(m.var_a - (ea2 - ea * ea)) < 1e-10);
        CHECK(m.cov_na == doctest::Approx(n - std::norm(ea)).epsilon(1e-10));

        // quadrature covariance at t = 0 from the Fock state
        const Eigen::MatrixXcd x = f.a + f.ad();
        const Eigen::MatrixXcd p = cplx{0.0, -1.0} * (f.a - f.ad());
        const double mx = f.expect(rho, x).real(), mp = f.expect(rho, p).real();
        const double vxx = f.expect(rho, x * x).real() - mx * mx;
        const double vpp = f.expect(rho, p * p).real() - mp * mp;
        const double vxp = 0.5 * f.expect(rho, x * p + p * x).real() - mx * mp;
        const auto cov = gaussian::covariance_at(m, 1.0, 0.0);
        CHECK(cov.v11 == doctest::Approx(vxx).epsilon(1e-9));
        CHECK(cov.v22 == doctest::Approx(vpp).epsilon(1e-9));
        CHECK(cov.v12 == doctest::Approx(vxp).epsilon(1e-9));
        CHECK(cov.mean_xi[0] == doctest::Approx(mx).epsilon(1e-10));
        CHECK(cov.mean_xi[1] == doctest::Approx(mp).epsilon(1e-10));
    }
}

TEST_CASE("coherence of a mixed Gaussian state equals the entropy difference") {
    const Fock f(120);
    const double n0 = 0.4;
    const cplx alpha{0.8, 0.2};
    const double r = 0.3;
    const Eigen::MatrixXcd U = f.displace(alpha) * f.squeeze(r);
    const Eigen::MatrixXcd rho = U * f.thermal(n0) * U.adjoint();
    const double nbar = f.expect(rho, f.ad() * f.a).real();
    const double ref = thermal_entropy_bits(nbar) - entropy_bits(rho);

    // the same state through the channel formulas: u = 1 with an added thermal v
    const auto m = gaussian::initial_moments({alpha, r});
    // a thermal pre-state of n0 scales the squeezed-vacuum covariance by 2 n0 + 1
    gaussian::CovarianceMatrix cov = gaussian::covariance_at(m, 1.0, 0.0);
    cov.v11 *= 2.0 * n0 + 1.0;
    cov.v22 *= 2.0 * n0 + 1.0;
    cov.v12 *= 2.0 * n0 + 1.0;
    CHECK(gaussian::coherence(cov, nbar) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("closed forms at t = 0") {
    const auto coh = gaussian::initial_moments(gaussian::StateSpec::coherent(1.0));
    const auto c1 = gaussian::covariance_at(coh, 1.0, 0.0);
    CHECK(std::abs(gaussian::coherence(c1, gaussian::mean_number(coh, 1.0, 0.0)) - 2.0) <= 1e-9);

    const auto sq = gaussian::initial_moments(gaussian::StateSpec::squeezed(1.0));
    const auto c2 = gaussian::covariance_at(sq, 1.0, 0.0);
    CHECK(std::abs(c2.v11 - std::exp(-2.0)) <= 1e-10);
    CHECK(std::abs(c2.v22 - std::exp(2.0)) <= 1e-10);
    CHECK(std::abs(c2.v12) <= 1e-10);
    const double n = std::pow(std::sinh(1.0), 2);
    const double want = (n + 1.0) * std::log2(n + 1.0) - n * std::log2(n);
    CHECK(std::abs(gaussian::coherence(c2, gaussian::mean_number(sq, 1.0, 0.0)) - want) <= 1e-9);

    const auto vac = gaussian::initial_moments(gaussian::StateSpec::vacuum());
    CHECK(gaussian::coherence(gaussian::covariance_at(vac, 1.0, 0.0), 0.0) == 0.0);
}

TEST_CASE("thermal states carry no coherence") {
    const auto vac = gaussian::initial_moments({});
    for (double v : {0.0, 1e-6, 0.3, 5.0, 200.0}) {
        for (double au : {1.0, 0.5, 0.0}) {
            const auto cov = gaussian::covariance_at(vac, au, v);
            CHECK(gaussian::coherence(cov, gaussian::mean_number(vac, au, v)) <= 1e-8);
        }
    }
}

TEST_CASE("random loss channels stay physical") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const gaussian::StateSpec st{{4.0 * (U(rng) - 0.5), 4.0 * (U(rng) - 0.5)}, 2.0 * U(rng)};
        const cplx u = std::polar(U(rng), 6.283185307179586 * U(rng));
        const double v = U(rng) < 0.2 ? 0.0 : 10.0 * U(rng);
        const auto m = gaussian::initial_moments(st);
        const auto cov = gaussian::covariance_at(m, u, v);
        CHECK(cov.nu() >= 1.0 - 1e-9);
        CHECK(gaussian::coherence(cov, gaussian::mean_number(m, u, v)) >= 0.0);
        CHECK(std::isfinite(cov.v12));
    }
}

TEST_CASE("unphysical inputs are rejected") {
    const auto m = gaussian::initial_moments({});
    CHECK_THROWS_AS(gaussian::covariance_at(m, 1.0, -0.1), PhysicalityError);
    gaussian::CovarianceMatrix bad;
    bad.v11 = 0.5;
    bad.v22 = 0.5;
    CHECK_THROWS_AS(gaussian::coherence(bad, 0.0), PhysicalityError);
}

TEST_CASE("wigner function is normalized with the right moments") {
    const auto m = gaussian::initial_moments({{0.7, -0.4}, 0.4});
    const auto cov = gaussian::covariance_at(m, cplx{0.6, 0.3}, 0.2);
    const double L = 12.0;
    const int n = 241;
    const double dx = 2.0 * L / (n - 1);
    double norm = 0.0, mx = 0.0, xx = 0.0, xp = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double x = -L + i * dx, p = -L + j * dx;
            const double w = gaussian::wigner(cov, {x, p}) * dx * dx;
            norm += w;
            mx += x * w;
            xx += x * x * w;
            xp += x * p * w;
        }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mx == doctest::Approx(cov.mean_xi[0]).epsilon(1e-8));
    CHECK(xx - mx * mx == doctest::Approx(cov.v11).epsilon(1e-8));
    CHECK(xp - mx * cov.mean_xi[1] == doctest::Approx(cov.v12).epsilon(1e-7));

    gaussian::CovarianceMatrix singular;
    singular.v11 = 0.0;
    CHECK_THROWS_AS(gaussian::wigner(singular, {0.0, 0.0}), DomainError);
}

TEST_CASE("moment and occupation examples") {
    const auto vac = gaussian::initial_moments(gaussian::StateSpec::vacuum());
    CHECK(vac.mean_a == cplx{});
    CHECK(vac.var_a == cplx{});
    CHECK(vac.cov_na == 0.0);
    const auto coh = gaussian::initial_moments(gaussian::StateSpec::coherent(2.0));
    CHECK(coh.mean_a == cplx{2.0, 0.0});
    CHECK(coh.var_a == cplx{});
    CHECK(coh.cov_na == 0.0);
    const auto sq = gaussian::initial_moments(gaussian::StateSpec::squeezed(1.0));
    CHECK(sq.var_a.real() == doctest::Approx(-1.813430).epsilon(1e-6));
    CHECK(sq.cov_na == doctest::Approx(1.381098).epsilon(1e-6));

    CHECK(gaussian::mean_number(coh, 1.0, 0.0) == doctest::Approx(4.0));
    CHECK(gaussian::mean_number(sq, 1.0, 0.0) == doctest::Approx(1.381098).epsilon(1e-6));
    for (const auto& m : {vac, coh, sq}) CHECK(gaussian::mean_number(m, 0.0, 3.2) == doctest::Approx(3.2));

    const auto c = gaussian::covariance_at(coh, 1.0, 0.0);
    CHECK(c.v11 == doctest::Approx(1.0));
    CHECK(c.v22 == doctest::Approx(1.0));
    CHECK(c.v12 == 0.0);
    CHECK(c.nu() == doctest::Approx(1.0));
    const auto th = gaussian::covariance_at(sq, 0.0, 0.7);
    CHECK(th.v11 == doctest::Approx(2.4));
    CHECK(th.v22 == doctest::Approx(2.4));
    CHECK(th.v12 == 0.0);
    const double r = 0.6;
    const auto s6 = gaussian::covariance_at(gaussian::initial_moments(gaussian::StateSpec::squeezed(r)), 1.0, 0.0);
    CHECK(s6.v11 == doctest::Approx(std::exp(-2.0 * r)).epsilon(1e-12));
    CHECK(s6.v22 == doctest::Approx(std::exp(2.0 * r)).epsilon(1e-12));
    CHECK(gaussian::coherence(gaussian::covariance_at(sq, 1.0, 0.0), sq.mean_number()) ==
          doctest::Approx(2.33691).epsilon(1e-5));
}

TEST_CASE("wigner function examples") {
    const auto vac = gaussian::covariance_at(gaussian::initial_moments({}), 1.0, 0.0);
    CHECK(gaussian::wigner(vac, {0.0, 0.0}) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-12));
    double sum = 0.0;
    for (int i = 0; i <= 400; ++i)
        for (int j = 0; j <= 400; ++j) sum += gaussian::wigner(vac, {-10.0 + 0.05 * i, -10.0 + 0.05 * j});
    CHECK(std::abs(sum * 0.05 * 0.05 - 1.0) <= 1e-4);

    const auto m = gaussian::initial_moments({{0.5, 1.0}, 0.3});
    const auto cov = gaussian::covariance_at(m, cplx{0.3, -0.5}, 0.4);
    const double peak = gaussian::wigner(cov, cov.mean_xi);
    for (double dx : {-0.05, 0.05})
        for (double dp : {-0.05, 0.0, 0.05}) CHECK(gaussian::wigner(cov, {cov.mean_xi[0] + dx, cov.mean_xi[1] + dp}) < peak);
}
