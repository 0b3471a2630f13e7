// master.hpp: time-local master-equation coefficients and crossover maps
//
//   omega0'(t) = -Im[u'/u],  gamma(t) = -Re[u'/u],  gamma~(t) = v' - 2 v Re[u'/u]
//
// so that free evolution gives omega0' = omega0 and gamma = gamma~ = 0.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gaussolve/greens.hpp"

namespace gaussolve::master {

struct MasterCoefficients {
    std::vector<double> times;
    std::vector<double> omega_prime;
    std::vector<double> gamma;
    std::vector<double> gamma_tilde;
    std::vector<bool> singular_mask;  // |u| < u_floor; coefficients there are NaN
};

// Evaluated on the decimated output grid. Throws NumericalError when every
// point is singular.
MasterCoefficients master_coefficients(const greens::GreensSolution& sol, double u_floor = 1e-6);

enum class Direction { Falling, Rising };  // + to -, - to +

struct SignChange {
    double t;
    Direction direction;
    std::size_t index;  // crossing lies in [times[index], times[index + 1]]
};

// Linearly interpolated zero crossings. NaN entries are gaps: a sign change
// across a gap is not reported. Runs of exact zeros between opposite signs
// report the midpoint of the run.
std::vector<SignChange> detect_sign_changes(std::span<const double> series, std::span<const double> times);

// Row-major table: rows indexed by coupling, columns by time.
struct Table {
    std::size_t rows{0};
    std::size_t cols{0};
    std::vector<double> data;

    Table() = default;
    Table(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
};

struct BoundaryPoint {
    double eta_s;
    double t;           // where d gamma/dt turns from positive to negative
    Direction direction;
    double t_backflow;  // where gamma then crosses zero
};

struct CrossoverMap {
    std::vector<double> eta_s;
    std::vector<double> times;
    Table dgamma_dt;
    Table dC_deta;
    std::vector<BoundaryPoint> boundary;
    std::vector<BoundaryPoint> slope_flips;  // every + to - flip of d gamma/dt; t_backflow NaN
};

// dC/d eta_s by three-point differences along the coupling axis, d gamma/dt
// along time. A + to - flip of d gamma/dt is a boundary point when gamma is
// positive there and crosses below zero before the slope turns positive again.
// |gamma| and |d gamma/dt| at or below kZeroFloor are treated as zero.
// Throws DomainError for non-rectangular tables or fewer than 3 points per axis.
inline constexpr double kZeroFloor = 1e-12;
CrossoverMap crossover_map(std::span<const double> eta_s, std::span<const double> times, const Table& coherence,
                           const Table& gamma);

}  // namespace gaussolve::master
