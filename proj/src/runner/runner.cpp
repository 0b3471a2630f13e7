#include "gaussolve/runner/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <thread>

#include "gaussolve/errors.hpp"
#include "gaussolve/gaussian.hpp"
#include "gaussolve/oracle.hpp"
#include "gaussolve/runner/output.hpp"

namespace gaussolve::runner {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kUFloor = 1e-6;
constexpr double kInstabilityTol = 1e-4;
constexpr const char* kVersion = "1.0.0";

// Runs fn(0..jobs-1) on up to `workers` threads. fn must not throw.
template <class F>
void parallel_for(std::size_t jobs, std::size_t workers, F&& fn) {
    if (workers <= 1 || jobs <= 1) {
        for (std::size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < jobs; i = next++) fn(i);
        });
    for (auto& t : pool) t.join();
}

struct BathOutcome {
    greens::GreensSolution sol;
    master::MasterCoefficients mc;
    std::string status{"ok"};
};

BathOutcome solve_bath(const bath::BathSpec& b, const greens::TimeGrid& grid, const bath::QuadratureSpec& q) {
    BathOutcome out;
    try {
        out.sol = greens::solve(b, grid, q);
        out.mc = master::master_coefficients(out.sol, kUFloor);
    } catch (const PhysicalityError&) {
        out.status = "unphysical";
    } catch (const NumericalError&) {
        out.status = "numerical_error";
    } catch (const DomainError&) {
        out.status = "domain_error";
    }
    return out;
}

std::vector<double> coherence_series(const greens::GreensSolution& sol, const gaussian::StateSpec& state) {
    const auto m0 = gaussian::initial_moments(state);
    std::vector<double> c(sol.grid.output_count());
    for (std::size_t m = 0; m < c.size(); ++m) {
        const auto u = sol.u_out(m);
        const auto cov = gaussian::covariance_at(m0, u, sol.v[m]);
        c[m] = gaussian::coherence(cov, gaussian::mean_number(m0, u, sol.v[m]));
    }
    return c;
}

std::string snapshot_name(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "wigner_t%g.csv", t);
    return buf;
}

// Relative-max deviation; absolute when the reference vanishes.
double relative_max(const std::vector<double>& a, const std::vector<double>& ref) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff = std::max(diff, std::abs(a[i] - ref[i]));
        scale = std::max(scale, std::abs(ref[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

std::string table_csv(const std::vector<double>& eta_s, const std::vector<double>& times, const master::Table& tab) {
    std::vector<std::string> header{"eta_s"};
    for (double t : times) header.push_back(format_double(t));
    CsvBuilder csv(header);
    for (std::size_t i = 0; i < tab.rows; ++i) {
        csv.add(eta_s[i]);
        for (std::size_t j = 0; j < tab.cols; ++j) csv.add(tab(i, j));
        csv.end_row();
    }
    return csv.str();
}

std::string boundary_csv(const std::vector<master::BoundaryPoint>& pts) {
    CsvBuilder csv(kBoundaryColumns);
    for (const auto& p : pts) {
        csv.add(p.eta_s).add(p.t).add(p.direction == master::Direction::Falling ? "pos_to_neg" : "neg_to_pos");
        csv.add(p.t_backflow).end_row();
    }
    return csv.str();
}

}  // namespace

std::size_t effective_workers(std::size_t requested, std::size_t jobs) {
    std::size_t w = requested;
    if (w == 0) w = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GAUSSOLVE_WORKERS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap > 0) w = std::min(w, static_cast<std::size_t>(cap));
    }
    return std::max<std::size_t>(1, std::min(w, jobs));
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    ScenarioResult res;
    res.solution = greens::solve(cfg.bath, cfg.grid, cfg.quad);
    const auto& sol = res.solution;
    const std::size_t n = cfg.grid.output_count();
    if (cfg.outputs.master_coeffs) res.coefficients = master::master_coefficients(sol, kUFloor);

    const auto m0 = gaussian::initial_moments(cfg.state);
    res.rows.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        const auto u = sol.u_out(m);
        const double v = sol.v[m];
        const auto cov = gaussian::covariance_at(m0, u, v);
        const double nbar = gaussian::mean_number(m0, u, v);
        const double c = gaussian::coherence(cov, nbar);
        auto& row = res.rows[m];
        row = {cfg.grid.output_time(m), u.real(), u.imag(), std::abs(u), v, cov.v11, cov.v22, cov.v12, cov.nu(),
               nbar, c, kNaN, kNaN, kNaN, 0.0};
        if (cfg.outputs.master_coeffs) {
            const auto& mc = res.coefficients;
            row[11] = mc.omega_prime[m];
            row[12] = mc.gamma[m];
            row[13] = mc.gamma_tilde[m];
            row[14] = mc.singular_mask[m] ? 1.0 : 0.0;
        } else {
            row[14] = std::abs(u) < kUFloor ? 1.0 : 0.0;
        }
    }
    return res;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    struct Key {
        double s, T, eta;
    };
    std::vector<Key> baths;
    for (double s : cfg.s)
        for (double T : cfg.T_s)
            for (double e : cfg.eta_over_eta_c) baths.push_back({s, T, e});

    const std::size_t nt = cfg.grid.output_count();
    const std::size_t per_bath = cfg.alpha.size() * cfg.r.size() * nt;
    std::vector<SweepRow> rows(baths.size() * per_bath);
    const auto times = cfg.grid.output_times();

    parallel_for(baths.size(), effective_workers(cfg.workers, baths.size()), [&](std::size_t i) {
        const Key& k = baths[i];
        BathOutcome out;
        try {
            const auto b = cfg.bath_for(k.s, k.T, k.eta);
            out = solve_bath(b, cfg.grid, cfg.quad_for(b));
        } catch (const DomainError&) {
            out.status = "domain_error";
        }
        std::size_t slot = i * per_bath;
        for (double a : cfg.alpha)
            for (double r : cfg.r) {
                std::vector<double> c(nt, kNaN);
                std::string status = out.status;
                if (status == "ok") {
                    try {
                        c = coherence_series(out.sol, gaussian::StateSpec{{a, 0.0}, r});
                    } catch (const PhysicalityError&) {
                        status = "unphysical";
                        c.assign(nt, kNaN);
                    }
                }
                for (std::size_t m = 0; m < nt; ++m) {
                    SweepRow& row = rows[slot++];
                    row = {k.s, k.T, k.eta, a, r, times[m], kNaN, kNaN, kNaN, kNaN, status};
                    if (status != "ok") continue;
                    row.C_bits = c[m];
                    row.gamma = out.mc.gamma[m];
                    row.abs_u = std::abs(out.sol.u_out(m));
                    row.v = out.sol.v[m];
                }
            }
    });
    return rows;
}

CrossoverResult run_crossover(const SweepConfig& cfg) {
    if (cfg.s.size() != 1 || cfg.T_s.size() != 1 || cfg.alpha.size() != 1 || cfg.r.size() != 1)
        throw ConfigError("crossover: s, T_s, alpha and r must each hold a single value");
    if (cfg.eta_over_eta_c.size() < 3) throw ConfigError("crossover: need at least 3 eta_over_eta_c values");

    const std::size_t ne = cfg.eta_over_eta_c.size();
    const std::size_t nt = cfg.grid.output_count();
    const auto times = cfg.grid.output_times();
    const gaussian::StateSpec state{{cfg.alpha[0], 0.0}, cfg.r[0]};

    CrossoverResult res;
    res.coherence = master::Table(ne, nt, kNaN);
    res.gamma = master::Table(ne, nt, kNaN);
    res.gamma_tilde = master::Table(ne, nt, kNaN);
    res.status.assign(ne, "ok");

    parallel_for(ne, effective_workers(cfg.workers, ne), [&](std::size_t i) {
        BathOutcome out;
        try {
            const auto b = cfg.bath_for(cfg.s[0], cfg.T_s[0], cfg.eta_over_eta_c[i]);
            out = solve_bath(b, cfg.grid, cfg.quad_for(b));
        } catch (const DomainError&) {
            out.status = "domain_error";
        }
        if (out.status == "ok") {
            try {
                const auto c = coherence_series(out.sol, state);
                for (std::size_t m = 0; m < nt; ++m) res.coherence(i, m) = c[m];
            } catch (const PhysicalityError&) {
                out.status = "unphysical";
            }
            for (std::size_t m = 0; m < nt; ++m) {
                res.gamma(i, m) = out.mc.gamma[m];
                res.gamma_tilde(i, m) = out.mc.gamma_tilde[m];
            }
        }
        res.status[i] = out.status;
    });

    res.map = master::crossover_map(cfg.eta_over_eta_c, times, res.coherence, res.gamma);
    return res;
}

OracleReport run_oracle_check(const ScenarioConfig& cfg) {
    OracleReport rep;
    rep.times = cfg.grid.output_times();
    const std::size_t n = rep.times.size();

    const oracle::Propagator prop(oracle::discretize(cfg.bath, cfg.oracle.N, cfg.oracle.omega_max, cfg.oracle.sampling));
    rep.u_oracle.resize(n);
    rep.v_oracle.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        rep.u_oracle[m] = prop.u(rep.times[m]);
        rep.v_oracle[m] = prop.v(rep.times[m], cfg.bath.T_s);
    }

    if (cfg.oracle.convergence_check) {
        const oracle::Propagator fine(
            oracle::discretize(cfg.bath, 2 * cfg.oracle.N, cfg.oracle.omega_max, cfg.oracle.sampling));
        std::vector<double> v2(n);
        for (std::size_t m = 0; m < n; ++m) {
            rep.n_doubling_u_delta = std::max(rep.n_doubling_u_delta, std::abs(fine.u(rep.times[m]) - rep.u_oracle[m]));
            v2[m] = fine.v(rep.times[m], cfg.bath.T_s);
        }
        rep.n_doubling_v_delta = relative_max(rep.v_oracle, v2);
        rep.convergence_checked = true;
    }

    try {
        const auto sol = greens::solve(cfg.bath, cfg.grid, cfg.quad);
        rep.u_volterra.resize(n);
        for (std::size_t m = 0; m < n; ++m) rep.u_volterra[m] = sol.u_out(m);
        rep.v_volterra = sol.v;
    } catch (const NumericalError& e) {
        rep.failure = e.what();
        rep.u_max_abs_error = std::numeric_limits<double>::infinity();
        rep.v_rel_max_error = std::numeric_limits<double>::infinity();
        rep.pass = false;
        return rep;
    }

    for (std::size_t m = 0; m < n; ++m)
        rep.u_max_abs_error = std::max(rep.u_max_abs_error, std::abs(rep.u_volterra[m] - rep.u_oracle[m]));
    rep.v_rel_max_error = relative_max(rep.v_volterra, rep.v_oracle);
    rep.pass = rep.u_max_abs_error <= cfg.oracle.u_tol && rep.v_rel_max_error <= cfg.oracle.v_tol;
    return rep;
}

std::vector<std::string> write_scenario(const ScenarioConfig& cfg, const ScenarioResult& res,
                                        const std::filesystem::path& dir) {
    std::vector<std::string> files;
    if (cfg.outputs.timeseries) {
        CsvBuilder csv(kScenarioColumns);
        for (const auto& row : res.rows) {
            for (std::size_t k = 0; k + 1 < row.size(); ++k) csv.add(row[k]);
            csv.add(row.back() != 0.0 ? "1" : "0");
            csv.end_row();
        }
        write_file(dir / "timeseries.csv", csv.str());
        files.emplace_back("timeseries.csv");
    }

    const auto& w = cfg.outputs.wigner;
    if (!w.times.empty()) {
        const auto m0 = gaussian::initial_moments(cfg.state);
        const double step = cfg.grid.output_step();
        for (double t_req : w.times) {
            const auto m = static_cast<std::size_t>(std::lround(t_req / step));
            const double t = cfg.grid.output_time(m);
            const auto cov = gaussian::covariance_at(m0, res.solution.u_out(m), res.solution.v[m]);
            static constexpr std::array<std::string_view, 3> header{"x", "p", "W"};
            CsvBuilder csv(header);
            const double dx = 2.0 * w.extent / static_cast<double>(w.points - 1);
            for (std::size_t i = 0; i < w.points; ++i)
                for (std::size_t j = 0; j < w.points; ++j) {
                    const double x = -w.extent + static_cast<double>(i) * dx;
                    const double p = -w.extent + static_cast<double>(j) * dx;
                    csv.add(x).add(p).add(gaussian::wigner(cov, {x, p}));
                    csv.end_row();
                }
            const std::string name = snapshot_name(t);
            write_file(dir / name, csv.str());
            files.push_back(name);
        }
    }
    return files;
}

std::vector<std::string> write_sweep(const std::vector<SweepRow>& rows, const std::filesystem::path& dir) {
    CsvBuilder csv(kSweepColumns);
    for (const auto& r : rows) {
        csv.add(r.s).add(r.T_s).add(r.eta_over_eta_c).add(r.alpha).add(r.r).add(r.t);
        csv.add(r.C_bits).add(r.gamma).add(r.abs_u).add(r.v).add(r.status);
        csv.end_row();
    }
    write_file(dir / "sweep.csv", csv.str());
    return {"sweep.csv"};
}

std::vector<std::string> write_crossover(const CrossoverResult& res, const std::filesystem::path& dir) {
    const auto& eta = res.map.eta_s;
    const auto& t = res.map.times;
    write_file(dir / "coherence.csv", table_csv(eta, t, res.coherence));
    write_file(dir / "gamma.csv", table_csv(eta, t, res.gamma));
    write_file(dir / "gamma_tilde.csv", table_csv(eta, t, res.gamma_tilde));
    write_file(dir / "dC_deta.csv", table_csv(eta, t, res.map.dC_deta));
    write_file(dir / "dgamma_dt.csv", table_csv(eta, t, res.map.dgamma_dt));
    write_file(dir / "boundary.csv", boundary_csv(res.map.boundary));
    write_file(dir / "slope_flips.csv", boundary_csv(res.map.slope_flips));

    static constexpr std::array<std::string_view, 2> header{"eta_s", "status"};
    CsvBuilder status(header);
    for (std::size_t i = 0; i < eta.size(); ++i) status.add(eta[i]).add(res.status[i]).end_row();
    write_file(dir / "status.csv", status.str());
    return {"coherence.csv",  "gamma.csv",       "gamma_tilde.csv", "dC_deta.csv",
            "dgamma_dt.csv",  "boundary.csv",    "slope_flips.csv", "status.csv"};
}

std::vector<std::string> write_oracle_report(const ScenarioConfig& cfg, const OracleReport& rep,
                                             const std::filesystem::path& dir) {
    std::vector<std::string> files;
    if (rep.failure.empty()) {
        static constexpr std::array<std::string_view, 7> header{"t",           "re_u_volterra", "im_u_volterra",
                                                                "re_u_oracle", "im_u_oracle",   "v_volterra",
                                                                "v_oracle"};
        CsvBuilder csv(header);
        for (std::size_t m = 0; m < rep.times.size(); ++m) {
            csv.add(rep.times[m]).add(rep.u_volterra[m].real()).add(rep.u_volterra[m].imag());
            csv.add(rep.u_oracle[m].real()).add(rep.u_oracle[m].imag()).add(rep.v_volterra[m]).add(rep.v_oracle[m]);
            csv.end_row();
        }
        write_file(dir / "oracle_compare.csv", csv.str());
        files.emplace_back("oracle_compare.csv");
    }
    json doc;
    doc["u_max_abs_error"] = rep.u_max_abs_error;
    doc["v_rel_max_error"] = rep.v_rel_max_error;
    doc["u_tol"] = cfg.oracle.u_tol;
    doc["v_tol"] = cfg.oracle.v_tol;
    if (rep.convergence_checked) {
        doc["n_doubling_u_delta"] = rep.n_doubling_u_delta;
        doc["n_doubling_v_delta"] = rep.n_doubling_v_delta;
    }
    doc["pass"] = rep.pass;
    if (!rep.failure.empty()) doc["volterra_failure"] = rep.failure;
    write_json(dir / "oracle_report.json", doc);
    files.emplace_back("oracle_report.json");
    return files;
}

void write_manifest(const std::filesystem::path& dir, std::string_view command, const json& resolved,
                    const std::vector<std::string>& files) {
    json doc;
    doc["tool"] = "gaussolve";
    doc["version"] = kVersion;
    doc["command"] = std::string(command);
    doc["config"] = resolved;
    doc["solver"] = {{"volterra", "AB2 predictor, trapezoid corrector, trapezoid memory sum"},
                     {"fluctuation", "double trapezoid sum on the solver grid"},
                     {"thermal_kernel", "graded Gauss-Legendre panels, checked under node doubling"},
                     {"thermal_kernel_tol", 1e-6},
                     {"instability_tol", kInstabilityTol},
                     {"u_floor", kUFloor},
                     {"physicality_tol", gaussian::kPhysicalityTol},
                     {"float_format", "%.17g"}};
    doc["files"] = files;
    write_json(dir / "manifest.json", doc);
}

}  // namespace gaussolve::runner
