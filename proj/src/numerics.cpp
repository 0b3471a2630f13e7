#include "gaussolve/numerics.hpp"

#include "gaussolve/errors.hpp"

namespace gaussolve::num {

namespace {

// Derivative at x[i0 + at] of the quadratic through three consecutive samples.
double three_point(const double* y, const double* x, int at) {
    const double x0 = x[0], x1 = x[1], x2 = x[2];
    const double xs = x[at];
    const double d0 = ((xs - x1) + (xs - x2)) / ((x0 - x1) * (x0 - x2));
    const double d1 = ((xs - x0) + (xs - x2)) / ((x1 - x0) * (x1 - x2));
    const double d2 = ((xs - x0) + (xs - x1)) / ((x2 - x0) * (x2 - x1));
    return d0 * y[0] + d1 * y[1] + d2 * y[2];
}

}  // namespace

std::vector<double> gradient(std::span<const double> y, std::span<const double> x) {
    if (y.size() != x.size()) throw DomainError("gradient: length mismatch");
    const std::size_t n = y.size();
    if (n < 3) throw DomainError("gradient: need at least 3 points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x[i] > x[i - 1])) throw DomainError("gradient: abscissae must be strictly increasing");

    std::vector<double> d(n);
    d[0] = three_point(y.data(), x.data(), 0);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = three_point(y.data() + i - 1, x.data() + i - 1, 1);
    d[n - 1] = three_point(y.data() + n - 3, x.data() + n - 3, 2);
    return d;
}

std::vector<double> gradient_uniform(std::span<const double> y, double dx) {
    const std::size_t n = y.size();
    if (n < 3) throw DomainError("gradient: need at least 3 points");
    if (!(dx > 0.0)) throw DomainError("gradient: spacing must be positive");
    std::vector<double> d(n);
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dx);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i - 1]) / (2.0 * dx);
    d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * dx);
    return d;
}

}  // namespace gaussolve::num
