#include "gaussolve/runner/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "gaussolve/errors.hpp"

namespace gaussolve::runner {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

// Rejects keys outside `allowed` so that typos do not silently fall back to defaults.
void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [key, _] : obj.items()) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
        if (!ok) fail(where, "unknown key '" + key + "'");
    }
}

const json& section(const json& doc, const char* key) {
    static const json empty = json::object();
    if (!doc.contains(key)) return empty;
    return doc.at(key);
}

double number(const json& obj, const std::string& where, const char* key, double fallback) {
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where + "." + key, "must be finite");
    return x;
}

std::size_t count(const json& obj, const std::string& where, const char* key, std::size_t fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(where + "." + key, "expected a nonnegative integer");
    return static_cast<std::size_t>(v.get<long long>());
}

bool flag(const json& obj, const std::string& where, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) fail(where + "." + key, "expected true or false");
    return obj.at(key).get<bool>();
}

std::string text(const json& obj, const std::string& where, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) fail(where + "." + key, "expected a string");
    return obj.at(key).get<std::string>();
}

// A list of numbers or {start, stop, count} with uniform spacing.
std::vector<double> range(const json& obj, const std::string& where, const char* key, std::vector<double> fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    const std::string name = where + "." + key;
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array()) {
        for (const auto& e : v) {
            if (!e.is_number()) fail(name, "list entries must be numbers");
            out.push_back(e.get<double>());
        }
    } else if (v.is_object()) {
        check_keys(v, name, {"start", "stop", "count"});
        if (!v.contains("start") || !v.contains("stop") || !v.contains("count"))
            fail(name, "range needs start, stop and count");
        const double a = number(v, name, "start", 0.0);
        const double b = number(v, name, "stop", 0.0);
        const std::size_t n = count(v, name, "count", 0);
        if (n == 0) fail(name, "count must be >= 1");
        if (n == 1) {
            out.push_back(a);
        } else {
            for (std::size_t i = 0; i < n; ++i)
                out.push_back(i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
        }
    } else {
        fail(name, "expected a number, a list or {start, stop, count}");
    }
    if (out.empty()) fail(name, "empty range");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1])) fail(name, "values must be strictly increasing");
    for (double x : out)
        if (!std::isfinite(x)) fail(name, "values must be finite");
    return out;
}

greens::TimeGrid parse_grid(const json& g, double omega_c, bool strict) {
    check_keys(g, "grid", {"t_max", "h", "decimation"});
    const double t_max = number(g, "grid", "t_max", 20.0);
    const double h = number(g, "grid", "h", 0.005);
    const std::size_t dec = count(g, "grid", "decimation", 20);
    try {
        auto grid = greens::TimeGrid::from_step(t_max, h, dec);
        grid.validate(omega_c, strict);
        if (grid.output_count() < 3) fail("grid", "need at least 3 output points");
        return grid;
    } catch (const DomainError& e) {
        fail("grid", e.what());
    }
}

bath::QuadratureScheme parse_scheme(const std::string& name) {
    if (name == "graded_panels") return bath::QuadratureScheme::GaussLegendrePanels;
    if (name == "transformed_trapezoid") return bath::QuadratureScheme::TransformedTrapezoid;
    fail("quadrature.scheme", "expected 'graded_panels' or 'transformed_trapezoid'");
}

const char* scheme_name(bath::QuadratureScheme s) {
    return s == bath::QuadratureScheme::GaussLegendrePanels ? "graded_panels" : "transformed_trapezoid";
}

const char* sampling_name(oracle::Sampling s) { return s == oracle::Sampling::Midpoint ? "midpoint" : "graded"; }

json grid_json(const greens::TimeGrid& g) { return {{"t_max", g.t_max}, {"h", g.h}, {"decimation", g.decimation}}; }

void set_path(json& doc, const std::string& path, json value) {
    json* node = &doc;
    std::size_t begin = 0;
    while (true) {
        const std::size_t dot = path.find('.', begin);
        const std::string key = path.substr(begin, dot == std::string::npos ? std::string::npos : dot - begin);
        if (key.empty()) fail("--set " + path, "empty path component");
        if (!node->is_object()) fail("--set " + path, "'" + key + "' is not inside an object");
        if (dot == std::string::npos) {
            (*node)[key] = std::move(value);
            return;
        }
        node = &(*node)[key];
        if (node->is_null()) *node = json::object();
        begin = dot + 1;
    }
}

}  // namespace

std::size_t SweepConfig::cell_count() const noexcept {
    return s.size() * T_s.size() * eta_over_eta_c.size() * alpha.size() * r.size();
}

bath::BathSpec SweepConfig::bath_for(double s_val, double T_val, double eta_s) const {
    return bath::BathSpec::with_relative_coupling(eta_s, s_val, omega_c, T_val, omega0);
}

bath::QuadratureSpec SweepConfig::quad_for(const bath::BathSpec& b) const {
    bath::QuadratureSpec q;
    q.omega_max = omega_max_over_cutoff * b.omega_c;
    q.n_nodes = n_nodes;
    q.scheme = scheme;
    return q;
}

json load_json(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config file " + file.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config file " + file.string() + " is not valid JSON: " + e.what());
    }
}

void apply_overrides(json& doc, const std::vector<std::string>& assignments) {
    for (const auto& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + a + "'");
        const std::string path = a.substr(0, eq);
        const std::string raw = a.substr(eq + 1);
        json value = json::parse(raw, nullptr, false);
        if (value.is_discarded()) value = raw;
        set_path(doc, path, std::move(value));
    }
}

ScenarioConfig parse_scenario(const json& doc, bool strict_resolution) {
    if (!doc.is_object()) throw ConfigError("scenario config must be a JSON object");
    check_keys(doc, "config", {"bath", "state", "grid", "quadrature", "outputs", "oracle", "output_path", "description"});
    ScenarioConfig cfg;

    const json& b = section(doc, "bath");
    check_keys(b, "bath", {"eta", "eta_over_eta_c", "s", "omega_c", "T_s", "omega0"});
    const bool has_abs = b.contains("eta");
    const bool has_rel = b.contains("eta_over_eta_c");
    if (has_abs == has_rel) throw ConfigError("bath: give exactly one of eta and eta_over_eta_c");
    cfg.bath.s = number(b, "bath", "s", 1.0);
    cfg.bath.omega_c = number(b, "bath", "omega_c", 5.0);
    cfg.bath.T_s = number(b, "bath", "T_s", 0.0);
    cfg.bath.omega0 = number(b, "bath", "omega0", 1.0);
    try {
        if (has_abs) {
            cfg.bath.eta = number(b, "bath", "eta", 0.0);
            cfg.bath.validate();
        } else {
            cfg.bath = bath::BathSpec::with_relative_coupling(number(b, "bath", "eta_over_eta_c", 0.0), cfg.bath.s,
                                                              cfg.bath.omega_c, cfg.bath.T_s, cfg.bath.omega0);
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("bath: ") + e.what());
    }

    const json& st = section(doc, "state");
    check_keys(st, "state", {"alpha", "r"});
    if (st.contains("alpha")) {
        const auto& a = st.at("alpha");
        if (a.is_number()) {
            cfg.state.alpha = a.get<double>();
        } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
            cfg.state.alpha = {a[0].get<double>(), a[1].get<double>()};
        } else {
            throw ConfigError("state.alpha: expected a number or [re, im]");
        }
    }
    cfg.state.r = number(st, "state", "r", 0.0);

    cfg.grid = parse_grid(section(doc, "grid"), cfg.bath.omega_c, strict_resolution);

    const json& q = section(doc, "quadrature");
    check_keys(q, "quadrature", {"omega_max", "n_nodes", "scheme"});
    cfg.quad = bath::QuadratureSpec::defaults_for(cfg.bath);
    cfg.quad.omega_max = number(q, "quadrature", "omega_max", cfg.quad.omega_max);
    cfg.quad.n_nodes = count(q, "quadrature", "n_nodes", cfg.quad.n_nodes);
    cfg.quad.scheme = parse_scheme(text(q, "quadrature", "scheme", scheme_name(cfg.quad.scheme)));
    try {
        cfg.quad.validate(cfg.bath);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("quadrature: ") + e.what());
    }

    const json& o = section(doc, "outputs");
    check_keys(o, "outputs", {"timeseries", "master_coeffs", "wigner_snapshot"});
    cfg.outputs.timeseries = flag(o, "outputs", "timeseries", true);
    cfg.outputs.master_coeffs = flag(o, "outputs", "master_coeffs", true);
    const json& w = section(o, "wigner_snapshot");
    check_keys(w, "outputs.wigner_snapshot", {"times", "extent", "points"});
    if (w.contains("times")) {
        if (!w.at("times").is_array()) throw ConfigError("outputs.wigner_snapshot.times: expected a list");
        for (const auto& t : w.at("times")) {
            if (!t.is_number()) throw ConfigError("outputs.wigner_snapshot.times: entries must be numbers");
            const double tv = t.get<double>();
            if (tv < 0.0 || tv > cfg.grid.t_max)
                throw ConfigError("outputs.wigner_snapshot.times: entries must lie in [0, t_max]");
            cfg.outputs.wigner.times.push_back(tv);
        }
    }
    cfg.outputs.wigner.extent = number(w, "outputs.wigner_snapshot", "extent", 6.0);
    cfg.outputs.wigner.points = count(w, "outputs.wigner_snapshot", "points", 61);
    if (!(cfg.outputs.wigner.extent > 0.0) || cfg.outputs.wigner.points < 2)
        throw ConfigError("outputs.wigner_snapshot: need extent > 0 and points >= 2");

    const json& orc = section(doc, "oracle");
    check_keys(orc, "oracle", {"N", "omega_max", "sampling", "u_tol", "v_tol", "convergence_check"});
    cfg.oracle.N = count(orc, "oracle", "N", 600);
    cfg.oracle.omega_max = number(orc, "oracle", "omega_max", 10.0 * cfg.bath.omega_c);
    const std::string sampling = text(orc, "oracle", "sampling", "graded");
    if (sampling == "graded")
        cfg.oracle.sampling = oracle::Sampling::GaussLegendreGraded;
    else if (sampling == "midpoint")
        cfg.oracle.sampling = oracle::Sampling::Midpoint;
    else
        throw ConfigError("oracle.sampling: expected 'graded' or 'midpoint'");
    cfg.oracle.u_tol = number(orc, "oracle", "u_tol", 5e-3);
    cfg.oracle.v_tol = number(orc, "oracle", "v_tol", 5e-3);
    cfg.oracle.convergence_check = flag(orc, "oracle", "convergence_check", true);
    if (cfg.oracle.N < 2) throw ConfigError("oracle.N: must be >= 2");
    if (!(cfg.oracle.omega_max >= 8.0 * cfg.bath.omega_c)) throw ConfigError("oracle.omega_max: must be >= 8 omega_c");
    if (!(cfg.oracle.u_tol > 0.0) || !(cfg.oracle.v_tol > 0.0)) throw ConfigError("oracle: tolerances must be > 0");

    cfg.output_path = text(doc, "config", "output_path", "out");
    return cfg;
}

SweepConfig parse_sweep(const json& doc) {
    if (!doc.is_object()) throw ConfigError("sweep config must be a JSON object");
    check_keys(doc, "config",
               {"bath", "sweep", "grid", "quadrature", "workers", "max_cells", "output_path", "description"});
    SweepConfig cfg;

    const json& b = section(doc, "bath");
    check_keys(b, "bath", {"omega_c", "omega0"});
    cfg.omega_c = number(b, "bath", "omega_c", 5.0);
    cfg.omega0 = number(b, "bath", "omega0", 1.0);
    if (!(cfg.omega_c > 0.0) || !(cfg.omega0 > 0.0)) throw ConfigError("bath: omega_c and omega0 must be > 0");

    const json& sw = section(doc, "sweep");
    check_keys(sw, "sweep", {"s", "T_s", "eta_over_eta_c", "alpha", "r"});
    cfg.s = range(sw, "sweep", "s", {1.0});
    cfg.T_s = range(sw, "sweep", "T_s", {1.0});
    if (!sw.contains("eta_over_eta_c")) throw ConfigError("sweep.eta_over_eta_c: required");
    cfg.eta_over_eta_c = range(sw, "sweep", "eta_over_eta_c", {});
    cfg.alpha = range(sw, "sweep", "alpha", {0.0});
    cfg.r = range(sw, "sweep", "r", {0.0});
    for (double x : cfg.s)
        if (!(x > 0.0)) throw ConfigError("sweep.s: values must be > 0");
    for (double x : cfg.T_s)
        if (x < 0.0) throw ConfigError("sweep.T_s: values must be >= 0");
    for (double x : cfg.eta_over_eta_c)
        if (x < 0.0) throw ConfigError("sweep.eta_over_eta_c: values must be >= 0");

    cfg.grid = parse_grid(section(doc, "grid"), cfg.omega_c, true);

    const json& q = section(doc, "quadrature");
    check_keys(q, "quadrature", {"omega_max_over_cutoff", "n_nodes", "scheme"});
    cfg.omega_max_over_cutoff = number(q, "quadrature", "omega_max_over_cutoff", 10.0);
    cfg.n_nodes = count(q, "quadrature", "n_nodes", 1024);
    cfg.scheme = parse_scheme(text(q, "quadrature", "scheme", scheme_name(cfg.scheme)));
    if (!(cfg.omega_max_over_cutoff >= 8.0)) throw ConfigError("quadrature.omega_max_over_cutoff: must be >= 8");
    if (cfg.n_nodes < 64) throw ConfigError("quadrature.n_nodes: must be >= 64");

    cfg.workers = count(doc, "config", "workers", 0);
    cfg.max_cells = count(doc, "config", "max_cells", 10000);
    if (cfg.cell_count() > cfg.max_cells) {
        std::ostringstream msg;
        msg << "sweep has " << cfg.cell_count() << " cells, above max_cells = " << cfg.max_cells;
        throw ConfigError(msg.str());
    }
    cfg.output_path = text(doc, "config", "output_path", "out");
    return cfg;
}

json to_json(const ScenarioConfig& c) {
    json doc;
    doc["bath"] = {{"eta", c.bath.eta},
                   {"eta_over_eta_c", c.bath.eta_over_eta_c()},
                   {"s", c.bath.s},
                   {"omega_c", c.bath.omega_c},
                   {"T_s", c.bath.T_s},
                   {"omega0", c.bath.omega0}};
    doc["state"] = {{"alpha", {c.state.alpha.real(), c.state.alpha.imag()}}, {"r", c.state.r}};
    doc["grid"] = grid_json(c.grid);
    doc["quadrature"] = {{"omega_max", c.quad.omega_max},
                         {"n_nodes", c.quad.n_nodes},
                         {"scheme", scheme_name(c.quad.scheme)}};
    doc["outputs"] = {{"timeseries", c.outputs.timeseries},
                      {"master_coeffs", c.outputs.master_coeffs},
                      {"wigner_snapshot",
                       {{"times", c.outputs.wigner.times},
                        {"extent", c.outputs.wigner.extent},
                        {"points", c.outputs.wigner.points}}}};
    doc["oracle"] = {{"N", c.oracle.N},
                     {"omega_max", c.oracle.omega_max},
                     {"sampling", sampling_name(c.oracle.sampling)},
                     {"u_tol", c.oracle.u_tol},
                     {"v_tol", c.oracle.v_tol},
                     {"convergence_check", c.oracle.convergence_check}};
    doc["output_path"] = c.output_path;
    return doc;
}

json to_json(const SweepConfig& c) {
    json doc;
    doc["bath"] = {{"omega_c", c.omega_c}, {"omega0", c.omega0}};
    doc["sweep"] = {{"s", c.s}, {"T_s", c.T_s}, {"eta_over_eta_c", c.eta_over_eta_c}, {"alpha", c.alpha}, {"r", c.r}};
    doc["grid"] = grid_json(c.grid);
    doc["quadrature"] = {{"omega_max_over_cutoff", c.omega_max_over_cutoff},
                         {"n_nodes", c.n_nodes},
                         {"scheme", scheme_name(c.scheme)}};
    doc["workers"] = c.workers;
    doc["max_cells"] = c.max_cells;
    doc["output_path"] = c.output_path;
    return doc;
}

}  // namespace gaussolve::runner
