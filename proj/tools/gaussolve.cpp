// gaussolve: command-line driver
//
//   gaussolve solve <config> [--set key=value ...] [--out dir]
//   gaussolve sweep <config> ...
//   gaussolve crossover <config> ...
//   gaussolve oracle-check <config> ...
//
// Exit codes: 0 ok, 1 other failure, 2 config error, 3 numerical
// instability, 4 oracle mismatch.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gaussolve/errors.hpp"
#include "gaussolve/runner/config.hpp"
#include "gaussolve/runner/output.hpp"
#include "gaussolve/runner/runner.hpp"

namespace gs = gaussolve;
namespace rn = gaussolve::runner;

namespace {

struct Invocation {
    std::string config;
    std::vector<std::string> sets;
    std::string out;
};

void add_common(CLI::App* cmd, Invocation& inv) {
    cmd->add_option("config", inv.config, "JSON configuration file")->required();
    cmd->add_option("--set", inv.sets, "override a config key, e.g. --set bath.T_s=20")->take_all();
    cmd->add_option("--out", inv.out, "output directory (overrides output_path)");
}

rn::json load(const Invocation& inv) {
    auto doc = rn::load_json(inv.config);
    rn::apply_overrides(doc, inv.sets);
    if (!inv.out.empty()) doc["output_path"] = inv.out;
    return doc;
}

int cmd_solve(const Invocation& inv) {
    const auto cfg = rn::parse_scenario(load(inv));
    const auto res = rn::run_scenario(cfg);
    const auto files = rn::write_scenario(cfg, res, cfg.output_path);
    rn::write_manifest(cfg.output_path, "solve", rn::to_json(cfg), files);
    std::printf("solve: %zu rows -> %s\n", res.rows.size(), cfg.output_path.c_str());
    return gs::exit_code::ok;
}

int cmd_sweep(const Invocation& inv) {
    const auto cfg = rn::parse_sweep(load(inv));
    const auto rows = rn::run_sweep(cfg);
    const auto files = rn::write_sweep(rows, cfg.output_path);
    rn::write_manifest(cfg.output_path, "sweep", rn::to_json(cfg), files);
    std::size_t failed = 0;
    for (const auto& r : rows) failed += r.status != "ok";
    std::printf("sweep: %zu cells, %zu rows (%zu failed) -> %s\n", cfg.cell_count(), rows.size(), failed,
                cfg.output_path.c_str());
    return gs::exit_code::ok;
}

int cmd_crossover(const Invocation& inv) {
    const auto cfg = rn::parse_sweep(load(inv));
    const auto res = rn::run_crossover(cfg);
    const auto files = rn::write_crossover(res, cfg.output_path);
    rn::write_manifest(cfg.output_path, "crossover", rn::to_json(cfg), files);
    std::printf("crossover: %zu couplings, %zu boundary points -> %s\n", res.map.eta_s.size(),
                res.map.boundary.size(), cfg.output_path.c_str());
    return gs::exit_code::ok;
}

int cmd_oracle(const Invocation& inv) {
    // the resolution limit is waived so that coarse steps can be checked
    const auto cfg = rn::parse_scenario(load(inv), false);
    const auto rep = rn::run_oracle_check(cfg);
    const auto files = rn::write_oracle_report(cfg, rep, cfg.output_path);
    rn::write_manifest(cfg.output_path, "oracle-check", rn::to_json(cfg), files);
    std::printf("u_max_abs_error %s (tol %s)\n", rn::format_double(rep.u_max_abs_error).c_str(),
                rn::format_double(cfg.oracle.u_tol).c_str());
    std::printf("v_rel_max_error %s (tol %s)\n", rn::format_double(rep.v_rel_max_error).c_str(),
                rn::format_double(cfg.oracle.v_tol).c_str());
    if (rep.convergence_checked)
        std::printf("n_doubling_delta u %s v %s\n", rn::format_double(rep.n_doubling_u_delta).c_str(),
                    rn::format_double(rep.n_doubling_v_delta).c_str());
    if (!rep.failure.empty()) std::fprintf(stderr, "volterra solve failed: %s\n", rep.failure.c_str());
    std::printf("%s\n", rep.pass ? "PASS" : "FAIL");
    return rep.pass ? gs::exit_code::ok : gs::exit_code::oracle_mismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-state dynamics of a bosonic mode in an Ohmic-family bath"};
    app.require_subcommand(1);
    Invocation inv;
    auto* solve = app.add_subcommand("solve", "time series for one scenario");
    auto* sweep = app.add_subcommand("sweep", "long-format sweep over bath and state parameters");
    auto* cross = app.add_subcommand("crossover", "d gamma/dt and dC/d eta maps with boundary points");
    auto* check = app.add_subcommand("oracle-check", "compare against the finite-mode propagator");
    for (auto* c : {solve, sweep, cross, check}) add_common(c, inv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? gs::exit_code::ok : gs::exit_code::config;
    }

    try {
        if (solve->parsed()) return cmd_solve(inv);
        if (sweep->parsed()) return cmd_sweep(inv);
        if (cross->parsed()) return cmd_crossover(inv);
        return cmd_oracle(inv);
    } catch (const gs::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return gs::exit_code::config;
    } catch (const gs::DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return gs::exit_code::config;
    } catch (const gs::NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return gs::exit_code::numerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return gs::exit_code::failure;
    }
}
