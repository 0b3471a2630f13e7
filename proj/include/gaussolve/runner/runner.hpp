// runner.hpp: scenario, sweep, crossover and oracle-check pipelines

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gaussolve/greens.hpp"
#include "gaussolve/master.hpp"
#include "gaussolve/runner/config.hpp"

namespace gaussolve::runner {

inline constexpr std::array<std::string_view, 15> kScenarioColumns{
    "t",  "re_u", "im_u",   "abs_u",  "v",           "V11",       "V22",          "V12",
    "nu", "nbar", "C_bits", "omega_prime", "gamma", "gamma_tilde", "singular_flag"};

inline constexpr std::array<std::string_view, 11> kSweepColumns{
    "s", "T_s", "eta_over_eta_c", "alpha", "r", "t", "C_bits", "gamma", "abs_u", "v", "status"};

inline constexpr std::array<std::string_view, 4> kBoundaryColumns{"eta_s", "t", "direction", "t_backflow"};

struct ScenarioResult {
    greens::GreensSolution solution;
    master::MasterCoefficients coefficients;
    std::vector<std::array<double, 15>> rows;  // in kScenarioColumns order
};

// Throws NumericalError (including PhysicalityError) on instability.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

struct SweepRow {
    double s, T_s, eta_over_eta_c, alpha, r, t;
    double C_bits, gamma, abs_u, v;
    std::string status;  // "ok" or the failure kind; values are NaN on failure
};

// Rows ordered by (s, T_s, eta_over_eta_c, alpha, r, t) whatever the worker count.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

struct CrossoverResult {
    master::CrossoverMap map;
    master::Table coherence;
    master::Table gamma;
    master::Table gamma_tilde;
    std::vector<std::string> status;  // per coupling row
};

// Needs a single (s, T_s, alpha, r) combination and >= 3 couplings.
CrossoverResult run_crossover(const SweepConfig& cfg);

struct OracleReport {
    std::vector<double> times;
    std::vector<greens::cplx> u_volterra, u_oracle;
    std::vector<double> v_volterra, v_oracle;
    double u_max_abs_error{0.0};
    double v_rel_max_error{0.0};  // relative to max v_oracle; absolute when that is 0
    double n_doubling_u_delta{0.0};
    double n_doubling_v_delta{0.0};
    bool convergence_checked{false};
    bool pass{false};
    std::string failure;  // set when the Volterra side could not be computed
};

// Volterra instability is reported as a failed comparison, not an exception.
OracleReport run_oracle_check(const ScenarioConfig& cfg);

// Serializers. Each writes into `dir` (created if missing) and returns the
// file names written.
std::vector<std::string> write_scenario(const ScenarioConfig& cfg, const ScenarioResult& res,
                                        const std::filesystem::path& dir);
std::vector<std::string> write_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& dir);
std::vector<std::string> write_crossover(const CrossoverResult& res, const std::filesystem::path& dir);
std::vector<std::string> write_oracle_report(const ScenarioConfig& cfg, const OracleReport& rep,
                                             const std::filesystem::path& dir);

// Sidecar manifest: resolved config, solver settings, files written.
void write_manifest(const std::filesystem::path& dir, std::string_view command, const json& resolved,
                    const std::vector<std::string>& files);

// min(requested or hardware concurrency, GAUSSOLVE_WORKERS, jobs), at least 1.
std::size_t effective_workers(std::size_t requested, std::size_t jobs);

}  // namespace gaussolve::runner
