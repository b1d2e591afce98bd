// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "moore/analytic.hpp"
#include "moore/errors.hpp"
#include "moore/exact.hpp"
#include "moore/kernels.hpp"
#include "moore/motion.hpp"
#include "moore/observables.hpp"
#include "moore/phase_source.hpp"
#include "moore/rayleigh.hpp"

namespace moore::cli {

namespace {

using json = nlohmann::ordered_json;

// Raised for bad flag values found after CLI11 has accepted the command line.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Settings {
    std::optional<double> l0;
    std::optional<double> epsilon;
    std::optional<int> q;
    std::string method = "exact";
    std::string out;
    std::string format = "csv";
    std::string config;
    std::optional<double> tol;
    std::optional<double> exclusion_delta;
    std::optional<int> jmax;

    std::optional<double> t_start;
    std::optional<double> t_end;
    std::optional<long> samples;
    std::optional<double> t;
    std::optional<double> x;
    double threshold = 0.1;
    long nx = 4096;

    double a = 0.5;
    double t0 = 0.0;
    double dt = 0.01;
};

// ---------------------------------------------------------------- tables

using Cell = std::variant<double, long long, std::string>;

struct Report {
    std::string command;
    json params;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    json diagnostics = json::object();
};

json cell_json(const Cell& c)
{
    if (const double* d = std::get_if<double>(&c)) {
        return std::isfinite(*d) ? json(*d) : json(nullptr);
    }
    if (const long long* i = std::get_if<long long>(&c)) {
        return *i;
    }
    return std::get<std::string>(c);
}

std::string cell_text(const Cell& c)
{
    if (const double* d = std::get_if<double>(&c)) {
        return format_number(*d);
    }
    if (const long long* i = std::get_if<long long>(&c)) {
        return std::to_string(*i);
    }
    return std::get<std::string>(c);
}

std::string param_text(const json& v)
{
    if (v.is_number_float()) {
        return format_number(v.get<double>());
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

void write_csv(const Report& r, std::ostream& os)
{
    os << "# moore_cavity " << MOORE_VERSION << " " << r.command;
    for (const auto& [k, v] : r.params.items()) {
        os << " " << k << "=" << param_text(v);
    }
    os << "\n";
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        os << (i ? "," : "") << r.columns[i];
    }
    os << "\n";
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << cell_text(row[i]);
        }
        os << "\n";
    }
    for (const auto& [k, v] : r.diagnostics.items()) {
        os << "# " << k << "=" << (v.is_number_float() ? format_number(v.get<double>()) : v.dump()) << "\n";
    }
}

void write_json(const Report& r, std::ostream& os)
{
    json doc;
    json params = r.params;
    params["version"] = MOORE_VERSION;
    params["command"] = r.command;
    doc["params"] = params;
    json results = json::object();
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
        json col = json::array();
        for (const auto& row : r.rows) {
            col.push_back(cell_json(row[c]));
        }
        results[r.columns[c]] = std::move(col);
    }
    doc["results"] = std::move(results);
    doc["diagnostics"] = r.diagnostics;
    os << doc.dump(2) << "\n";
}

json finite_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json to_json(std::span<const double> v)
{
    json out = json::array();
    for (double d : v) {
        out.push_back(finite_or_null(d));
    }
    return out;
}

json to_json(const PeakReport& p)
{
    return {{"count", p.count},
            {"positions", to_json(p.positions)},
            {"heights", to_json(p.heights)},
            {"widths", to_json(p.widths)},
            {"background", finite_or_null(p.background)}};
}

json to_json(const GrowthFit& g)
{
    return {{"rate", g.rate}, {"intercept", g.intercept}, {"residual", g.residual}};
}

// ---------------------------------------------------------------- settings

CavityParams cavity_params(const Settings& s)
{
    return CavityParams::make(s.l0.value_or(1.0), s.epsilon.value_or(0.01), s.q.value_or(4));
}

SolverOptions solver_options(const Settings& s)
{
    SolverOptions o;
    o.tol = s.tol.value_or(o.tol);
    o.exclusion_delta = s.exclusion_delta.value_or(o.exclusion_delta);
    o.jmax = s.jmax.value_or(o.jmax);
    return o;
}

SolutionMethod solution_method(const Settings& s)
{
    try {
        return parse_method(s.method);
    } catch (const DomainError&) {
        throw UsageError("--method must be one of exact, pert, rg");
    }
}

json cavity_json(const CavityParams& p, SolutionMethod m, const SolverOptions& o)
{
    return {{"l0", p.l0},
            {"epsilon", p.epsilon},
            {"q", p.q},
            {"method", std::string(to_string(m))},
            {"tol", o.tol},
            {"exclusion_delta", o.exclusion_delta},
            {"jmax", o.jmax}};
}

std::vector<double> time_grid(const Settings& s, double start, double end, long count)
{
    const double a = s.t_start.value_or(start);
    const double b = s.t_end.value_or(end);
    const long n = s.samples.value_or(count);
    if (n < 2) {
        throw UsageError("--samples must be at least 2");
    }
    if (!(b > a)) {
        throw UsageError("--t-end must exceed --t-start");
    }
    return kernels::linspace(a, b, static_cast<std::size_t>(n));
}

void add_grid(json& params, const std::vector<double>& ts)
{
    params["t_start"] = ts.front();
    params["t_end"] = ts.back();
    params["samples"] = ts.size();
}

// ---------------------------------------------------------------- commands

Report cmd_phase(const Settings& s)
{
    const CavityParams p = cavity_params(s);
    const SolverOptions o = solver_options(s);
    const SolutionMethod m = solution_method(s);
    const auto ts = time_grid(s, 0.0, 100.0 * p.l0, 1001);

    Report r{"phase", cavity_json(p, m, o), {"t", "R", "dR", "d2R", "d3R", "method", "in_validity", "near_ray"}, {}};
    add_grid(r.params, ts);
    const PhaseSource src(p, m, o);
    const auto samples = kernels::phase_grid(ts, src);
    for (const PhaseSample& x : samples) {
        r.rows.push_back({x.t, x.r, x.dr, x.d2r, x.d3r, std::string(to_string(m)),
                          static_cast<long long>(x.in_validity), static_cast<long long>(x.near_ray)});
    }
    double diff = 0.0;
    if (m != SolutionMethod::Exact) {
        const auto exact = kernels::value_grid(ts, PhaseSource(p, SolutionMethod::Exact, o));
        for (std::size_t i = 0; i < ts.size(); ++i) {
            diff = std::max(diff, std::abs(samples[i].r - exact[i]));
        }
    }
    r.diagnostics["max_abs_diff_vs_exact"] = diff;
    return r;
}

Report cmd_profile(const Settings& s)
{
    const CavityParams p = cavity_params(s);
    const SolverOptions o = solver_options(s);
    const SolutionMethod m = solution_method(s);
    const double t = *s.t;
    if (!(t >= -p.l0)) {
        throw UsageError("--t must be >= -L0");
    }
    if (s.nx < 64) {
        throw UsageError("--samples must be at least 64 for a profile");
    }
    const PhaseSource src(p, m, o);

    Report r{"profile", cavity_json(p, m, o), {"x", "T00", "excluded"}, {}};
    r.params["t"] = t;
    r.params["samples"] = s.nx;
    r.params["threshold"] = s.threshold;

    EnergyProfile prof;
    prof.t = t;
    prof.method = m;
    prof.excluded = exclusion_windows(t, src);
    const auto xs = kernels::linspace(0.0, mirror_position(t, p), static_cast<std::size_t>(s.nx));
    const auto values = kernels::density_over_x(t, xs, src);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const bool windowed = std::any_of(prof.excluded.begin(), prof.excluded.end(),
                                          [&](const Interval& w) { return w.contains(xs[i]); });
        const bool excluded = windowed || !std::isfinite(values[i]);
        r.rows.push_back({xs[i], excluded ? std::nan("") : values[i], static_cast<long long>(excluded)});
        if (excluded) {
            prof.dropped.push_back(xs[i]);
        } else {
            prof.xs.push_back(xs[i]);
            prof.t00.push_back(values[i]);
        }
    }
    try {
        r.diagnostics["peaks"] = to_json(peak_analysis(prof, s.threshold));
    } catch (const NoPeaks& e) {
        r.diagnostics["peaks"] = {{"count", 0}, {"note", e.what()}};
    }
    json windows = json::array();
    for (const Interval& w : prof.excluded) {
        windows.push_back({w.lo, w.hi});
    }
    r.diagnostics["excluded_intervals"] = windows;
    r.diagnostics["static_energy_density"] = static_energy_density(p.l0);
    return r;
}

Report cmd_timeseries(const Settings& s)
{
    const CavityParams p = cavity_params(s);
    const SolverOptions o = solver_options(s);
    const SolutionMethod m = solution_method(s);
    const double x = *s.x;
    if (!(x >= 0.0 && x <= p.l0 * (1.0 - p.epsilon))) {
        throw UsageError("--x must lie in [0, L0 (1 - epsilon)] so it stays inside the cavity");
    }
    const auto ts = time_grid(s, 0.0, 100.0 * p.l0, 2001);
    Report r{"timeseries", cavity_json(p, m, o), {"t", "T00", "excluded"}, {}};
    r.params["x"] = x;
    add_grid(r.params, ts);
    const auto values = kernels::density_over_t(x, ts, PhaseSource(p, m, o));
    for (std::size_t i = 0; i < ts.size(); ++i) {
        r.rows.push_back({ts[i], values[i], static_cast<long long>(!std::isfinite(values[i]))});
    }
    r.diagnostics["static_energy_density"] = static_energy_density(p.l0);
    return r;
}

Report cmd_energy(const Settings& s)
{
    const CavityParams p = cavity_params(s);
    const SolverOptions o = solver_options(s);
    const SolutionMethod m = solution_method(s);
    const double e = std::max(p.epsilon, 1e-3);
    const auto ts = time_grid(s, 0.3 * p.l0 / e, 1.0 * p.l0 / e, 15);
    if (ts.size() < 4) {
        throw UsageError("--samples must be at least 4 for a growth fit");
    }
    Report r{"energy", cavity_json(p, m, o), {"t", "E", "E_fit"}, {}};
    add_grid(r.params, ts);
    const PhaseSource src(p, m, o);
    std::vector<double> es(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        es[i] = total_energy(ts[i], src);
    }
    const GrowthFit g = growth_fit(ts, es);
    const double sign = es.front() < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        r.rows.push_back({ts[i], es[i], sign * std::exp(g.intercept + g.rate * ts[i])});
    }
    r.diagnostics["growth_fit"] = to_json(g);
    r.diagnostics["expected_rate"] = pi * p.q * p.epsilon / p.l0;
    return r;
}

Report cmd_peaks(const Settings& s)
{
    const CavityParams p = cavity_params(s);
    const SolverOptions o = solver_options(s);
    const SolutionMethod m = solution_method(s);
    const double e = std::max(p.epsilon, 1e-3);
    const auto ts = time_grid(s, 0.3 * p.l0 / e, 1.0 * p.l0 / e, 15);
    if (s.nx < 64) {
        throw UsageError("--nx must be at least 64");
    }
    Report r{"peaks", cavity_json(p, m, o), {"t", "count", "position", "height", "width", "background"}, {}};
    add_grid(r.params, ts);
    r.params["nx"] = s.nx;
    r.params["threshold"] = s.threshold;
    const PhaseSource src(p, m, o);
    std::vector<double> heights;
    std::vector<double> widths;
    for (double t : ts) {
        const PeakReport pk = resolved_peaks(t, src, static_cast<std::size_t>(s.nx), s.threshold);
        const auto top = static_cast<std::size_t>(
            std::max_element(pk.heights.begin(), pk.heights.end()) - pk.heights.begin());
        heights.push_back(pk.heights[top]);
        widths.push_back(pk.widths[top]);
        r.rows.push_back({t, static_cast<long long>(pk.count), pk.positions[top], pk.heights[top], pk.widths[top],
                          pk.background});
    }
    if (ts.size() >= 4) {
        r.diagnostics["height_fit"] = to_json(growth_fit(ts, heights));
        r.diagnostics["width_fit"] = to_json(growth_fit(ts, widths));
    }
    r.diagnostics["expected_height_rate"] = 2.0 * pi * p.q * p.epsilon / p.l0;
    r.diagnostics["expected_width_rate"] = -pi * p.q * p.epsilon / p.l0;
    return r;
}

Report cmd_rayleigh(const Settings& s)
{
    rayleigh::Params rp{s.epsilon.value_or(0.1), s.t0, s.a};
    rp.validate();
    const double t_end = s.t_end.value_or(s.t0 + 100.0);
    if (!(s.dt > 0.0 && s.dt <= 0.01)) {
        throw UsageError("--dt must lie in (0, 0.01]");
    }
    if (!(t_end > s.t0)) {
        throw UsageError("--t-end must exceed --t0");
    }
    Report r{"rayleigh",
             {{"epsilon", rp.epsilon}, {"t0", rp.t0}, {"a", rp.a}, {"dt", s.dt}, {"t_end", t_end}},
             {"t", "y_pert", "y_rg", "y_oracle"},
             {}};
    const auto traj = rayleigh::numeric_oracle(t_end, rp, s.dt);
    double err_rg = 0.0;
    double err_pert = 0.0;
    for (const auto& x : traj) {
        const double yp = rayleigh::perturbative_y(x.t, rp);
        const double yr = rayleigh::improved_y(x.t, rp);
        err_rg = std::max(err_rg, std::abs(yr - x.y));
        err_pert = std::max(err_pert, std::abs(yp - x.y));
        r.rows.push_back({x.t, yp, yr, x.y});
    }
    r.diagnostics["sup_error_rg"] = err_rg;
    r.diagnostics["sup_error_pert"] = err_pert;
    r.diagnostics["trailing_amplitude"] = rayleigh::trailing_amplitude(traj);
    r.diagnostics["flow_amplitude_at_end"] = rayleigh::amplitude_flow(t_end, rp).amplitude;
    return r;
}

// ---------------------------------------------------------------- verify

struct Check {
    std::string name;
    double value;
    std::string limit;
    std::string status;  // pass, fail, skip
};

Check bounded(std::string name, double value, double limit)
{
    return {std::move(name), value, "< " + format_number(limit), value < limit ? "pass" : "fail"};
}

Check near_rate(std::string name, double value, double expected)
{
    const bool ok = std::abs(value / expected - 1.0) < 0.1;
    return {std::move(name), value, format_number(expected) + " +-10%", ok ? "pass" : "fail"};
}

std::vector<Check> verify_checks(const CavityParams& p, const SolverOptions& o)
{
    std::vector<Check> checks;
    std::mt19937_64 rng(20240501);
    auto uniform = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    const double l0 = p.l0;

    double residual = 0.0;
    for (int i = 0; i < 300; ++i) {
        const double u = uniform(0.0, 100.0 * l0);
        const double l = mirror_position(u, p);
        residual = std::max(residual, std::abs(exact_R(u + l, p, o) - exact_R(u - l, p, o) - 2.0));
    }
    checks.push_back(bounded("moore_residual", residual, 1e-10));

    double initial = 0.0;
    for (auto m : {SolutionMethod::Exact, SolutionMethod::Perturbative, SolutionMethod::RGImproved}) {
        const PhaseSource src(p, m, o);
        for (double t : kernels::linspace(-l0, l0, 101)) {
            initial = std::max(initial, std::abs(src.value(t) - t / l0));
        }
    }
    checks.push_back(bounded("initial_interval", initial, 1e-14));

    const CavityParams still = CavityParams::make(l0, 0.0, p.q);
    double static_r = 0.0;
    double static_t = 0.0;
    for (auto m : {SolutionMethod::Exact, SolutionMethod::Perturbative, SolutionMethod::RGImproved}) {
        const PhaseSource src(still, m, o);
        for (int i = 0; i < 100; ++i) {
            const double t = uniform(0.0, 100.0 * l0);
            const double x = uniform(0.0, l0);
            static_r = std::max(static_r, std::abs(src.value(t) - t / l0));
            static_t = std::max(static_t, std::abs(energy_density(x, t, src) / static_energy_density(l0) - 1.0));
        }
    }
    checks.push_back(bounded("static_phase", static_r, 1e-12));
    checks.push_back(bounded("static_density_rel", static_t, 1e-10));

    double excess = 0.0;
    const double t_series = std::min(1.0 / std::max(p.epsilon, 1e-300), 100.0) * l0;
    for (int i = 0; i < 100; ++i) {
        const double t = uniform(0.0, t_series);
        const RGCoefficients c = rg_coefficients(t, p, o.jmax);
        const double gap = std::abs(rg_series_partial_sum(c, t, p) - rg_series_closed_form(t, p));
        excess = std::max(excess, gap - rg_series_tail_bound(c, p));
    }
    checks.push_back(bounded("series_tail_bound_excess", excess, 1e-13));

    const auto ts = kernels::linspace(0.0, 100.0 * l0, 10001);
    const auto rs = kernels::value_grid(ts, PhaseSource(p, SolutionMethod::Exact, o));
    double min_step = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < rs.size(); ++i) {
        min_step = std::min(min_step, rs[i] - rs[i - 1]);
    }
    checks.push_back({"monotonicity_min_step", min_step, "> 0", min_step > 0.0 ? "pass" : "fail"});

    if (p.q < 2 || p.epsilon == 0.0) {
        for (const char* n : {"height_rate", "width_rate", "energy_rate"}) {
            checks.push_back({n, std::nan(""), "needs q >= 2 and eps > 0", "skip"});
        }
        return checks;
    }
    const PhaseSource rg(p, SolutionMethod::RGImproved, o);
    std::vector<double> fit_t;
    std::vector<double> heights;
    std::vector<double> widths;
    std::vector<double> energies;
    for (double t : kernels::linspace(0.3 * l0 / p.epsilon, 1.0 * l0 / p.epsilon, 15)) {
        const PeakReport pk = resolved_peaks(t, rg, 4096, 0.1);
        const auto top = static_cast<std::size_t>(
            std::max_element(pk.heights.begin(), pk.heights.end()) - pk.heights.begin());
        fit_t.push_back(t);
        heights.push_back(pk.heights[top]);
        widths.push_back(pk.widths[top]);
        energies.push_back(total_energy(t, rg));
    }
    const double k = pi * p.q * p.epsilon / l0;
    checks.push_back(near_rate("height_rate", growth_fit(fit_t, heights).rate, 2.0 * k));
    checks.push_back(near_rate("width_rate", growth_fit(fit_t, widths).rate, -k));
    checks.push_back(near_rate("energy_rate", growth_fit(fit_t, energies).rate, k));
    return checks;
}

Report cmd_verify(const Settings& s, bool& all_pass)
{
    const CavityParams p = cavity_params(s);
    const SolverOptions o = solver_options(s);
    Report r{"verify", cavity_json(p, SolutionMethod::Exact, o), {"check", "value", "limit", "status"}, {}};
    r.params.erase("method");
    all_pass = true;
    std::size_t failed = 0;
    for (const Check& c : verify_checks(p, o)) {
        r.rows.push_back({c.name, c.value, c.limit, c.status});
        if (c.status == "fail") {
            all_pass = false;
            ++failed;
        }
    }
    r.diagnostics["failed"] = failed;
    return r;
}

// ---------------------------------------------------------------- plumbing

void add_common(CLI::App* sub, Settings& s, bool cavity = true)
{
    if (cavity) {
        sub->add_option("--q", s.q, "Drive harmonic q >= 1 (default 4)");
        sub->add_option("--epsilon", s.epsilon, "Drive amplitude, 0 <= eps < 1/(q pi) (default 0.01)");
        sub->add_option("--l0", s.l0, "Rest length L0 (default 1)");
        sub->add_option("--tol", s.tol, "Root-find tolerance in units of L0 (default 1e-12)");
        sub->add_option("--exclusion-delta", s.exclusion_delta, "Half-width of ray exclusion windows (default 1e-3)");
        sub->add_option("--jmax", s.jmax, "RG coefficient series length (default 200)");
    }
    sub->add_option("--out", s.out, "Output file (default stdout)");
    sub->add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--config", s.config, "key=value file; flags on the command line win");
}

void add_method(CLI::App* sub, Settings& s)
{
    sub->add_option("--method", s.method, "exact, pert or rg")->check(CLI::IsMember({"exact", "pert", "rg"}));
}

void add_grid(CLI::App* sub, Settings& s)
{
    sub->add_option("--t-start", s.t_start, "First time");
    sub->add_option("--t-end", s.t_end, "Last time");
    sub->add_option("--samples", s.samples, "Grid points (>= 2)");
}

// Fills options the command line left unset from the config file.
void apply_config(CLI::App* sub, const std::string& path)
{
    for (const auto& [key, value] : read_config(path)) {
        CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt == nullptr || key == "config") {
            throw UsageError("config file " + path + ": unknown key '" + key + "' for " + sub->get_name());
        }
        if (opt->count() == 0) {
            opt->add_result(value);
            opt->run_callback();
        }
    }
}

std::string trim(const std::string& v)
{
    const auto b = v.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = v.find_last_not_of(" \t\r");
    return v.substr(b, e - b + 1);
}

}  // namespace

std::string format_number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    for (int digits = 15; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*g", digits, v);
        if (std::strtod(buf, nullptr) == v) {
            break;
        }
    }
    return buf;
}

std::map<std::string, std::string> read_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read config file " + path);
    }
    std::map<std::string, std::string> out;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos || trim(t.substr(0, eq)).empty()) {
            throw std::runtime_error("config file " + path + ":" + std::to_string(n) + ": expected key=value");
        }
        std::string key = trim(t.substr(0, eq));
        if (key.rfind("--", 0) == 0) {
            key = key.substr(2);
        }
        out[key] = trim(t.substr(eq + 1));
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Moore's equation for a resonantly driven 1-D cavity", "moore_cavity"};
    app.require_subcommand(1);
    Settings s;

    auto* phase = app.add_subcommand("phase", "R(t) and its derivatives on a time grid");
    add_common(phase, s);
    add_method(phase, s);
    add_grid(phase, s);

    auto* profile = app.add_subcommand("profile", "T00(x) across the cavity at fixed t, with peak report");
    add_common(profile, s);
    add_method(profile, s);
    profile->add_option("--t", s.t, "Time")->required();
    profile->add_option("--samples", s.nx, "Grid points across the cavity (default 4096)");
    profile->add_option("--threshold", s.threshold, "Peak threshold as a fraction of max - background");

    auto* series = app.add_subcommand("timeseries", "T00(t) at fixed x");
    add_common(series, s);
    add_method(series, s);
    add_grid(series, s);
    series->add_option("--x", s.x, "Position")->required();

    auto* energy = app.add_subcommand("energy", "Total energy E(t) with exponential growth fit");
    add_common(energy, s);
    add_method(energy, s);
    add_grid(energy, s);

    auto* peaks = app.add_subcommand("peaks", "Tallest resolved peak over a time grid, with height and width fits");
    add_common(peaks, s);
    add_method(peaks, s);
    add_grid(peaks, s);
    peaks->add_option("--nx", s.nx, "Grid points across the cavity (default 4096)");
    peaks->add_option("--threshold", s.threshold, "Peak threshold as a fraction of max - background");

    auto* ray = app.add_subcommand("rayleigh", "Rayleigh oscillator: naive, RG and RK4 trajectories");
    add_common(ray, s, false);
    ray->add_option("--epsilon", s.epsilon, "Damping strength (default 0.1)");
    ray->add_option("--a", s.a, "Initial slope is 2a (default 0.5)");
    ray->add_option("--t0", s.t0, "Start time (default 0)");
    ray->add_option("--dt", s.dt, "RK4 step, at most 0.01 (default 0.01)");
    ray->add_option("--t-end", s.t_end, "End time (default t0 + 100)");

    auto* verify = app.add_subcommand("verify", "Run the invariant suite and print a pass/fail table");
    add_common(verify, s);

    CLI::App* chosen = nullptr;
    try {
        std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(rest);
        for (CLI::App* sub : app.get_subcommands()) {
            chosen = sub;
        }
        if (!s.config.empty()) {
            apply_config(chosen, s.config);
        }
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kInvalidInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    }

    bool all_pass = true;
    Report report;
    try {
        const std::string name = chosen->get_name();
        if (name == "phase") {
            report = cmd_phase(s);
        } else if (name == "profile") {
            report = cmd_profile(s);
        } else if (name == "timeseries") {
            report = cmd_timeseries(s);
        } else if (name == "energy") {
            report = cmd_energy(s);
        } else if (name == "peaks") {
            report = cmd_peaks(s);
        } else if (name == "rayleigh") {
            report = cmd_rayleigh(s);
        } else {
            report = cmd_verify(s, all_pass);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << chosen->help();
        return kInvalidInput;
    } catch (const InvalidParams& e) {
        err << "error: invalid parameters: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kInvalidInput;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }

    std::ofstream file;
    if (!s.out.empty()) {
        file.open(s.out, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "error: cannot open " << s.out << " for writing\n";
            return kInvalidInput;
        }
    }
    std::ostream& sink = s.out.empty() ? out : file;
    if (s.format == "json") {
        write_json(report, sink);
    } else {
        write_csv(report, sink);
    }
    sink.flush();
    if (!sink) {
        err << "error: write failed\n";
        return kInvalidInput;
    }
    if (!all_pass) {
        err << "verify: " << report.diagnostics["failed"].get<std::size_t>() << " check(s) failed\n";
        return kNumericalFailure;
    }
    return kSuccess;
}

}  // namespace moore::cli
