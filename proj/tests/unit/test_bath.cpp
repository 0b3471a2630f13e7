#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "doctest.h"
#include "gaussolve/bath.hpp"
#include "gaussolve/errors.hpp"

using namespace gaussolve;
using cplx = std::complex<double>;

namespace {

// Untruncated thermal kernel from the Bose expansion
//   g~(t) = eta wc^(1-s) Gamma(s+1) sum_{n>=1} (1/wc + n/T + i t)^{-(s+1)},
// with the n > n_max tail replaced by its integral.
cplx bose_series_kernel(const bath::BathSpec& b, double t, long n_max = 400000) {
    const double pre = b.eta * std::pow(b.omega_c, 1.0 - b.s) * std::tgamma(b.s + 1.0);
    cplx acc{0.0, 0.0};
    for (long n = n_max; n >= 1; --n)
        acc += std::pow(cplx{1.0 / b.omega_c + static_cast<double>(n) / b.T_s, t}, -(b.s + 1.0));
    const cplx z_tail{1.0 / b.omega_c + (static_cast<double>(n_max) + 0.5) / b.T_s, t};
    acc += (b.T_s / b.s) * std::pow(z_tail, -b.s);
    return pre * acc;
}

cplx fourier_of_spectral_density(const bath::BathSpec& b, double t) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double upper = 60.0 * b.omega_c;
    const double re = GK::integrate([&](double w) { return bath::spectral_density(b, w) * std::cos(w * t); }, 0.0,
                                    upper, 20, 1e-13);
    const double im = GK::integrate([&](double w) { return -bath::spectral_density(b, w) * std::sin(w * t); }, 0.0,
                                    upper, 20, 1e-13);
    return {re, im};
}

}  // namespace

TEST_CASE("spectral density values") {
    bath::BathSpec b;
    b.eta = 0.3;
    b.s = 1.0;
    b.omega_c = 5.0;
    CHECK(bath::spectral_density(b, 0.0) == 0.0);
    CHECK(bath::spectral_density(b, 2.0) == doctest::Approx(0.3 * 2.0 * std::exp(-0.4)));
    b.s = 0.5;
    CHECK(bath::spectral_density(b, 2.0) == doctest::Approx(0.3 * std::sqrt(2.0 * 5.0) * std::exp(-0.4)));
    b.s = 3.0;
    CHECK(bath::spectral_density(b, 2.0) == doctest::Approx(0.3 * 5.0 * std::pow(0.4, 3) * std::exp(-0.4)));
    CHECK_THROWS_AS(bath::spectral_density(b, -1.0), DomainError);
}

TEST_CASE("critical coupling") {
    CHECK(bath::critical_coupling(1.0, 5.0) == doctest::Approx(0.2));
    CHECK(bath::critical_coupling(0.5, 5.0) == doctest::Approx(1.0 / (5.0 * std::sqrt(std::numbers::pi))));
    CHECK(bath::critical_coupling(3.0, 5.0) == doctest::Approx(0.1));
    CHECK_THROWS_AS(bath::critical_coupling(0.0, 5.0), DomainError);
    const auto b = bath::BathSpec::with_relative_coupling(2.0, 1.0, 5.0, 1.0);
    CHECK(b.eta == doctest::Approx(0.4));
    CHECK(b.eta_over_eta_c() == doctest::Approx(2.0));
}

TEST_CASE("bath validation") {
    bath::BathSpec b;
    b.s = -1.0;
    CHECK_THROWS_AS(b.validate(), DomainError);
    b = {};
    b.T_s = -0.5;
    CHECK_THROWS_AS(b.validate(), DomainError);
    b = {};
    CHECK_NOTHROW(b.validate());
    bath::QuadratureSpec q;
    q.omega_max = 30.0;
    CHECK_THROWS_AS(q.validate(b), DomainError);
}

TEST_CASE("memory kernel matches the Fourier integral of J") {
    for (double s : {0.5, 1.0, 3.0}) {
        const auto b = bath::BathSpec::with_relative_coupling(1.0, s, 5.0, 1.0);
        for (double t : {0.0, 0.13, 1.0, 4.5}) {
            const cplx ref = fourier_of_spectral_density(b, t);
            const cplx got = bath::memory_kernel(b, t);
            CHECK(std::abs(got - ref) <= 1e-9 * std::abs(bath::memory_kernel(b, 0.0)));
        }
    }
}

TEST_CASE("bose occupation") {
    CHECK(bath::bose_occupation(1.0, 0.0) == 0.0);
    CHECK(bath::bose_occupation(1.0, 1.0) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)));
    CHECK(bath::bose_occupation(1e-3, 20.0) == doctest::Approx(20.0 / 1e-3 - 0.5).epsilon(1e-6));
    CHECK_THROWS_AS(bath::bose_occupation(0.0, 1.0), DomainError);
}

TEST_CASE("thermal kernel matches the Bose expansion") {
    for (double s : {0.5, 1.0, 3.0}) {
        const auto b = bath::BathSpec::with_relative_coupling(2.0, s, 5.0, 1.0);
        const auto q = bath::QuadratureSpec::defaults_for(b);
        const double scale = std::abs(bose_series_kernel(b, 0.0));
        for (double t : {0.0, 0.3, 2.0, 10.0, 20.0}) {
            const cplx ref = bose_series_kernel(b, t);
            CHECK(std::abs(bath::thermal_kernel(b, q, t) - ref) <= 2e-6 * scale);
        }
    }
}

TEST_CASE("thermal kernel at high temperature") {
    // the omega > 10 omega_c tail is not negligible at T_s = 20: about 5e-5 of g~(0)
    const auto b = bath::BathSpec::with_relative_coupling(2.0, 1.0, 5.0, 20.0);
    const auto q = bath::QuadratureSpec::defaults_for(b);
    const double scale = std::abs(bose_series_kernel(b, 0.0));
    for (double t : {0.0, 2.0, 20.0}) CHECK(std::abs(bath::thermal_kernel(b, q, t) - bose_series_kernel(b, t)) <= 1e-4 * scale);
}

TEST_CASE("thermal kernel grid") {
    auto b = bath::BathSpec::with_relative_coupling(2.0, 1.0, 5.0, 1.0);
    const auto q = bath::QuadratureSpec::defaults_for(b);
    const auto g = bath::ThermalKernelGrid::build(b, q, 0.005, 4000);
    CHECK(g.size() == 4001);
    CHECK_FALSE(g.is_zero());
    CHECK(g.convergence_shift() <= 1e-6);
    CHECK(g.values()[0].imag() == 0.0);
    CHECK(g.at(-7) == std::conj(g.at(7)));
    CHECK(std::abs(g.at(400) - bath::thermal_kernel(b, q, 2.0)) <= 1e-12 * std::abs(g.at(0)));

    b.T_s = 0.0;
    const auto z = bath::ThermalKernelGrid::build(b, q, 0.005, 10);
    CHECK(z.is_zero());
    CHECK(z.at(3) == cplx{0.0, 0.0});
}

TEST_CASE("thermal kernel grid rejects an unconverged quadrature") {
    const auto b = bath::BathSpec::with_relative_coupling(2.0, 0.5, 5.0, 1.0);
    auto q = bath::QuadratureSpec::defaults_for(b);
    q.n_nodes = 64;
    q.scheme = bath::QuadratureScheme::TransformedTrapezoid;
    CHECK_THROWS_AS(bath::ThermalKernelGrid::build(b, q, 0.005, 4000), NumericalError);
}

TEST_CASE("spectral density examples") {
    const auto b = bath::BathSpec{0.2, 1.0, 5.0, 1.0, 1.0};
    CHECK(bath::spectral_density(b, 1.0) == doctest::Approx(0.163746).epsilon(1e-6));
    // maximum at s omega_c
    for (double s : {0.5, 1.0, 3.0}) {
        const bath::BathSpec bs{0.2, s, 5.0, 1.0, 1.0};
        double best = 0.0, arg = 0.0;
        for (int i = 1; i <= 100000; ++i) {
            const double w = 1e-3 * i;
            if (const double j = bath::spectral_density(bs, w); j > best) {
                best = j;
                arg = w;
            }
        }
        CHECK(arg == doctest::Approx(s * 5.0).epsilon(1e-3));
    }
    CHECK(bath::bose_occupation(1.0, 1.0) == doctest::Approx(0.581977).epsilon(1e-6));
    CHECK(bath::bose_occupation(1.0, 20.0) == doctest::Approx(19.5).epsilon(0.03));
}
