// SPDX-License-Identifier: Apache-2.0
// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "moore/analytic.hpp"
#include "moore/exact.hpp"
#include "moore/kernels.hpp"
#include "moore/motion.hpp"
#include "moore/observables.hpp"
#include "moore/phase_source.hpp"
#include "moore/rayleigh.hpp"
#include "oracles.hpp"

using namespace moore;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail)
{
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) {
        ++failures;
    }
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

class Stopwatch {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const CavityParams fig = CavityParams::make(1.0, 0.01, 4);

void moore_residual()
{
    Stopwatch sw;
    std::mt19937_64 rng(1001);
    SolverOptions opt;
    opt.tol = 1e-12;
    double worst = 0.0;
    for (int q : {1, 2, 4}) {
        for (double eps : {0.001, 0.01}) {
            const auto p = CavityParams::make(1.0, eps, q);
            for (double u : oracle::uniform(rng, 0.0, 100.0, 1000)) {
                const double l = mirror_position(u, p);
                worst = std::max(worst, std::abs(exact_R(u + l, p, opt) - exact_R(u - l, p, opt) - 2.0));
            }
        }
    }
    const double s = sw.seconds();
    report(worst < 1e-10 && s < 30.0, "moore residual",
           fmt("max |R(u+L)-R(u-L)-2| = %.3g (< 1e-10), %.2f s (< 30 s)", worst, s));
}

void static_suite()
{
    std::mt19937_64 rng(1002);
    const auto p = CavityParams::make(1.0, 0.0, 4);
    double worst_r = 0.0;
    double worst_t = 0.0;
    for (auto m : {SolutionMethod::Exact, SolutionMethod::Perturbative, SolutionMethod::RGImproved}) {
        const PhaseSource src(p, m);
        for (int i = 0; i < 100; ++i) {
            const double t = oracle::uniform(rng, 0.0, 100.0, 1)[0];
            const double x = oracle::uniform(rng, 0.0, 1.0, 1)[0];
            worst_r = std::max(worst_r, std::abs(src.value(t) - t));
            worst_t = std::max(worst_t, std::abs(energy_density(x, t, src) - static_energy_density(1.0)));
        }
    }
    report(worst_r < 1e-12 && worst_t < 1e-10, "static suite",
           fmt("max |R - t| = %.3g (< 1e-12), max |T00 - static| = %.3g (< 1e-10)", worst_r, worst_t));
}

void hierarchy()
{
    const auto ts = kernels::linspace(80.0, 100.0, 20001);
    const auto exact = kernels::value_grid(ts, PhaseSource(fig, SolutionMethod::Exact));
    const auto pert = kernels::value_grid(ts, PhaseSource(fig, SolutionMethod::Perturbative));
    const auto rg = kernels::value_grid(ts, PhaseSource(fig, SolutionMethod::RGImproved));
    double err_p = 0.0;
    double err_rg = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        err_p = std::max(err_p, std::abs(pert[i] - exact[i]));
        err_rg = std::max(err_rg, std::abs(rg[i] - exact[i]));
    }
    report(err_rg < err_p / 5.0 && err_rg < 0.05, "hierarchy of validity",
           fmt("err(rg) = %.3g, err(pert) = %.3g; need err(rg) < err(pert)/5 and < 0.05", err_rg, err_p));
}

void series_identity()
{
    Stopwatch sw;
    std::mt19937_64 rng(1004);
    double worst = 0.0;
    for (int q : {2, 4}) {
        const auto p = CavityParams::make(1.0, 0.01, q);
        for (double t : oracle::uniform(rng, 0.0, 100.0, 100)) {
            const RGCoefficients c = rg_coefficients(t, p, 200);
            worst = std::max(worst, std::abs(rg_series_partial_sum(c, t, p) - rg_series_closed_form(t, p)));
        }
    }
    const double s = sw.seconds();
    report(worst < 1e-8 && s < 5.0, "series identity",
           fmt("max |partial(j<=200) - closed| = %.3g (< 1e-8), %.3f s (< 5 s)", worst, s));
}

void four_peak_profile()
{
    const PhaseSource src(fig, SolutionMethod::RGImproved);
    const PeakReport r = peak_analysis(energy_profile(20.4, 4096, src), 0.1);
    const double target = static_energy_density(1.0) / 16.0;
    const double rel = std::abs(r.background - target) / std::abs(target);
    report(r.count == 4 && rel < 0.2, "four-peak profile at t = 20.4",
           fmt("peaks = %zu (need 4), background = %.6g vs static/16 = %.6g (off by %.0f%%, need < 20%%)", r.count,
               r.background, target, 100.0 * rel));
}

void scaling_laws()
{
    Stopwatch sw;
    const PhaseSource src(fig, SolutionMethod::RGImproved);
    std::vector<double> ts;
    std::vector<double> heights;
    std::vector<double> widths;
    std::vector<double> energies;
    for (double t = 30.0; t <= 100.0 + 1e-9; t += 5.0) {
        const PeakReport r = resolved_peaks(t, src, 4096, 0.1);
        std::size_t top = 0;
        for (std::size_t i = 1; i < r.count; ++i) {
            if (r.heights[i] > r.heights[top]) {
                top = i;
            }
        }
        ts.push_back(t);
        heights.push_back(r.heights[top]);
        widths.push_back(r.widths[top]);
        energies.push_back(total_energy(t, src));
    }
    const double h = growth_fit(ts, heights).rate;
    const double w = growth_fit(ts, widths).rate;
    const double e = growth_fit(ts, energies).rate;
    const double k = pi * 4 * 0.01;
    const double s = sw.seconds();
    const bool ok = std::abs(h / (2 * k) - 1) < 0.1 && std::abs(w / -k - 1) < 0.1 && std::abs(e / k - 1) < 0.1;
    report(ok && s < 300.0, "scaling laws",
           fmt("height %.4f (2 pi q eps = %.4f), width %.4f (%.4f), energy %.4f (%.4f), all +-10%%; %.1f s (< 300 s)",
               h, 2 * k, w, -k, e, k, s));
}

void q1_average()
{
    const auto p = CavityParams::make(1.0, 0.01, 1);
    const auto ts = kernels::linspace(50.0, 52.0, 20001);
    std::string detail;
    bool ok = true;
    for (auto m : {SolutionMethod::Exact, SolutionMethod::RGImproved}) {
        const auto v = kernels::density_over_t(0.5, ts, PhaseSource(p, m));
        double sum = 0.0;
        std::size_t n = 0;
        for (double y : v) {
            if (std::isfinite(y)) {
                sum += y;
                ++n;
            }
        }
        const double ratio = (sum / static_cast<double>(n)) / static_energy_density(1.0);
        ok = ok && std::abs(ratio - 1.0) < 0.05;
        detail += fmt("%s%s avg/static = %.6f", detail.empty() ? "" : ", ", std::string(to_string(m)).c_str(), ratio);
    }
    report(ok, "q=1 averaging", detail + " (within 5%)");
}

void mode_boundary()
{
    std::mt19937_64 rng(1008);
    const PhaseSource src(fig, SolutionMethod::Exact);
    double worst = 0.0;
    for (int k : {1, 3, 7}) {
        for (double t : oracle::uniform(rng, 0.0, 50.0, 100)) {
            worst = std::max(worst, std::abs(mode_value(k, mirror_position(t, fig), t, src)));
        }
    }
    report(worst <= 1e-8, "mode boundary condition", fmt("max |psi_k(L(t), t)| = %.3g (<= 1e-8)", worst));
}

void rayleigh_suite()
{
    using namespace moore::rayleigh;
    double worst_amp = 0.0;
    for (double a : {0.1, 0.5, 1.0, 3.0}) {
        const auto traj = numeric_oracle(200.0, Params{0.1, 0.0, a}, 0.01);
        worst_amp = std::max(worst_amp, std::abs(trailing_amplitude(traj) / 2.0 - 1.0));
    }
    const Params p{0.1, 0.0, 0.5};
    const auto traj = numeric_oracle(100.0, p, 0.01);
    double rg = 0.0;
    double naive = 0.0;
    for (const auto& s : traj) {
        rg = std::max(rg, std::abs(improved_y(s.t, p) - s.y));
        naive = std::max(naive, std::abs(perturbative_y(s.t, p) - s.y));
    }
    report(worst_amp < 0.01 && rg <= 0.15 && naive > 1.0, "rayleigh suite",
           fmt("amplitude off by %.3g%% (< 1%%), sup err rg = %.4f (<= 0.15), pert = %.3f (> 1)", 100 * worst_amp, rg,
               naive));
}

// Difference step: a hundredth of the local variation length |R'/R''|, and
// far enough from a ray that the stencil keeps one bounce count.
double fd_step(double t, double dr, double d2r)
{
    const double ell = std::min(0.1, std::abs(dr / d2r));
    return std::min(1e-2 * ell, oracle::ray_distance(t, 1.0) / 4.0);
}

void derivative_checks()
{
    std::mt19937_64 rng(1010);
    double exact_worst = 0.0;
    double rg_worst[3] = {0.0, 0.0, 0.0};
    const int qs[3] = {1, 2, 4};
    const double eps = 0.01;
    for (int i = 0; i < 3; ++i) {
        const auto p = CavityParams::make(1.0, eps, qs[i]);
        // R = base + 2 * bounces; differencing the base in [-L0, L0] keeps
        // the digits that R ~ 100 would round away.
        auto base = [&](double t) { return trace_bounces(t, p).base; };
        auto rg = [&](double t) { return rg_R(t, p); };
        for (double t : oracle::uniform(rng, 1.5, 100.0, 1000)) {
            if (oracle::ray_distance(t, 1.0) < 1e-3) {
                continue;
            }
            const PhaseSample s = exact_sample(t, p);
            const double fd = oracle::d1(base, t, fd_step(t, s.dr, s.d2r));
            exact_worst = std::max(exact_worst, std::abs(exact_dR(t, p) - fd) / std::abs(fd));
            const double theta = qs[i] * pi * fold_time(t, 1.0).z;
            if (-p.parity_sign() * std::cos(theta) > -0.5) {
                const RgDerivatives d = rg_derivatives(t, p);
                const double rfd = oracle::d1(rg, t, fd_step(t, d.dr, d.d2r));
                rg_worst[i] = std::max(rg_worst[i], std::abs(d.dr - rfd) / std::abs(rfd));
            }
        }
    }
    const bool rg_ok = rg_worst[0] < 5 * eps && rg_worst[1] < 5 * eps && rg_worst[2] < 5 * eps;
    report(exact_worst < 1e-5 && rg_ok, "derivative checks",
           fmt("exact_dR rel err %.3g (< 1e-5); rg dr rel err q=1 %.2f eps, q=2 %.2f eps, q=4 %.2f eps (< 5 eps)",
               exact_worst, rg_worst[0] / eps, rg_worst[1] / eps, rg_worst[2] / eps));
}

}  // namespace

int main()
{
    Stopwatch total;
    moore_residual();
    static_suite();
    hierarchy();
    series_identity();
    four_peak_profile();
    scaling_laws();
    q1_average();
    mode_boundary();
    rayleigh_suite();
    derivative_checks();
    std::printf("%d of 10 criteria failed (%.1f s)\n", failures, total.seconds());
    return failures == 0 ? 0 : 1;
}
