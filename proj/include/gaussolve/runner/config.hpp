// config.hpp: JSON run configurations with dot-path overrides

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "gaussolve/bath.hpp"
#include "gaussolve/gaussian.hpp"
#include "gaussolve/greens.hpp"
#include "gaussolve/oracle.hpp"

namespace gaussolve::runner {

using json = nlohmann::json;

struct WignerSnapshot {
    std::vector<double> times;  // snapped to the nearest output time
    double extent{6.0};         // phase-space window [-extent, extent]^2
    std::size_t points{61};     // per axis
};

struct OutputFlags {
    bool timeseries{true};
    bool master_coeffs{true};  // false writes NaN in the coefficient columns
    WignerSnapshot wigner;
};

struct OracleParams {
    std::size_t N{600};
    double omega_max{0.0};  // 0 means 10 omega_c
    oracle::Sampling sampling{oracle::Sampling::GaussLegendreGraded};
    double u_tol{5e-3};
    double v_tol{5e-3};
    bool convergence_check{true};  // also runs 2N and reports the shift
};

struct ScenarioConfig {
    bath::BathSpec bath;
    gaussian::StateSpec state;
    greens::TimeGrid grid;
    bath::QuadratureSpec quad;
    OutputFlags outputs;
    OracleParams oracle;
    std::string output_path{"out"};
};

struct SweepConfig {
    std::vector<double> s;
    std::vector<double> T_s;
    std::vector<double> eta_over_eta_c;
    std::vector<double> alpha;  // real displacements
    std::vector<double> r;
    double omega_c{5.0};
    double omega0{1.0};
    greens::TimeGrid grid;
    double omega_max_over_cutoff{10.0};
    std::size_t n_nodes{1024};
    bath::QuadratureScheme scheme{bath::QuadratureScheme::GaussLegendrePanels};
    std::size_t workers{0};  // 0 = hardware concurrency; GAUSSOLVE_WORKERS caps it
    std::size_t max_cells{10000};
    std::string output_path{"out"};

    std::size_t cell_count() const noexcept;
    bath::BathSpec bath_for(double s_val, double T_val, double eta_s) const;
    bath::QuadratureSpec quad_for(const bath::BathSpec& b) const;
};

json load_json(const std::filesystem::path& file);

// Applies "a.b.c=value" assignments. The value is parsed as JSON when
// possible and taken as a string otherwise.
void apply_overrides(json& doc, const std::vector<std::string>& assignments);

// Parse and validate; every problem is reported as ConfigError. With
// strict_resolution the time step must also satisfy h <= 0.1/omega_c.
ScenarioConfig parse_scenario(const json& doc, bool strict_resolution = true);
SweepConfig parse_sweep(const json& doc);

// Fully resolved configurations (defaults filled in) for the run manifest.
json to_json(const ScenarioConfig& cfg);
json to_json(const SweepConfig& cfg);

}  // namespace gaussolve::runner
