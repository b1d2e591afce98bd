// SPDX-License-Identifier: Apache-2.0
#include "moore/observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "moore/errors.hpp"
#include "moore/kernels.hpp"
#include "moore/motion.hpp"

namespace moore {

namespace {

double median(std::vector<double> v)
{
    if (v.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (v.size() % 2 == 1) {
        return *mid;
    }
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

bool in_any(const std::vector<Interval>& windows, double x)
{
    return std::any_of(windows.begin(), windows.end(), [x](const Interval& w) { return w.contains(x); });
}

double lerp_at(double x0, double y0, double x1, double y1, double level)
{
    if (y1 == y0) {
        return 0.5 * (x0 + x1);
    }
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

// Half-maximum crossings around index `peak` of a sampled curve, skipping
// NaN samples. A side with no crossing reports nullopt.
struct Crossings {
    std::optional<double> left;
    std::optional<double> right;
};

Crossings half_max_crossings(std::span<const double> xs, std::span<const double> ys, std::size_t peak,
                             double level)
{
    Crossings out;
    std::size_t prev = peak;
    for (std::size_t j = peak; j-- > 0;) {
        if (std::isnan(ys[j])) {
            continue;
        }
        if (ys[j] <= level) {
            out.left = lerp_at(xs[j], ys[j], xs[prev], ys[prev], level);
            break;
        }
        prev = j;
    }
    prev = peak;
    for (std::size_t j = peak + 1; j < ys.size(); ++j) {
        if (std::isnan(ys[j])) {
            continue;
        }
        if (ys[j] <= level) {
            out.right = lerp_at(xs[prev], ys[prev], xs[j], ys[j], level);
            break;
        }
        prev = j;
    }
    return out;
}

struct Candidate {
    double x;
    double height;
    double width;
};

std::vector<std::size_t> local_maxima(std::span<const double> ys)
{
    std::vector<std::size_t> idx;
    const std::size_t n = ys.size();
    for (std::size_t i = 0; i < n; ++i) {
        const bool left_ok = (i == 0) || ys[i] > ys[i - 1];
        const bool right_ok = (i + 1 == n) || ys[i] >= ys[i + 1];
        if (left_ok && right_ok && n > 1) {
            idx.push_back(i);
        }
    }
    return idx;
}

// Keeps the tallest of any candidates whose half-maximum spans overlap.
std::vector<Candidate> merge_candidates(std::vector<Candidate> cands)
{
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.height > b.height; });
    std::vector<Candidate> kept;
    for (const Candidate& c : cands) {
        const bool dup = std::any_of(kept.begin(), kept.end(), [&](const Candidate& k) {
            return std::abs(c.x - k.x) <= 0.5 * (c.width + k.width);
        });
        if (!dup) {
            kept.push_back(c);
        }
    }
    std::sort(kept.begin(), kept.end(), [](const Candidate& a, const Candidate& b) { return a.x < b.x; });
    return kept;
}

double inter_peak_background(const EnergyProfile& profile, const std::vector<Candidate>& peaks, double spacing)
{
    std::vector<double> rest;
    rest.reserve(profile.t00.size());
    for (std::size_t i = 0; i < profile.xs.size(); ++i) {
        const double x = profile.xs[i];
        const bool near = std::any_of(peaks.begin(), peaks.end(), [&](const Candidate& p) {
            return std::abs(x - p.x) <= std::max(2.0 * p.width, 3.0 * spacing);
        });
        if (!near) {
            rest.push_back(profile.t00[i]);
        }
    }
    return rest.empty() ? median(profile.t00) : median(std::move(rest));
}

PeakReport to_report(const std::vector<Candidate>& peaks, double background)
{
    PeakReport report;
    report.count = peaks.size();
    report.background = background;
    for (const Candidate& p : peaks) {
        report.positions.push_back(p.x);
        report.heights.push_back(p.height);
        report.widths.push_back(p.width);
    }
    return report;
}

void check_peak_inputs(const EnergyProfile& profile, double threshold)
{
    if (profile.xs.size() < 64) {
        throw DomainError("peak analysis needs at least 64 retained samples");
    }
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw DomainError("peak analysis threshold must lie in (0, 1)");
    }
}

double profile_spacing(const EnergyProfile& profile)
{
    const std::size_t total = profile.xs.size() + profile.dropped.size();
    return profile.xs.back() / static_cast<double>(std::max<std::size_t>(total, 2) - 1);
}

}  // namespace

double static_energy_density(double l0) noexcept
{
    return -pi / (24.0 * l0 * l0);
}

double f_of_u(double u, const PhaseSource& source)
{
    const PhaseSample s = source.sample(u);
    if (s.near_ray) {
        throw SingularPoint("f(u): u lies inside the exclusion window of a singular null ray", u);
    }
    if (!(s.dr > 0.0)) {
        throw NonpositiveDerivative("f(u): R'(u) <= 0");
    }
    const double a = s.d2r / s.dr;
    return (s.d3r / s.dr - 1.5 * a * a + 0.5 * pi * pi * s.dr * s.dr) / (24.0 * pi);
}

double energy_density(double x, double t, const PhaseSource& source)
{
    const double wall = mirror_position(t, source.params());
    const double slack = 1e-12 * source.params().l0;
    if (!(x >= -slack && x <= wall + slack)) {
        throw DomainError("energy_density: x must lie inside the cavity [0, L(t)]");
    }
    double plus = 0.0;
    double minus = 0.0;
    try {
        plus = f_of_u(t + x, source);
    } catch (const SingularPoint& e) {
        throw SingularPoint(std::string(e.what()) + " (ray t+x)", e.u(), "t+x");
    }
    try {
        minus = f_of_u(t - x, source);
    } catch (const SingularPoint& e) {
        throw SingularPoint(std::string(e.what()) + " (ray t-x)", e.u(), "t-x");
    }
    return -plus - minus;
}

std::vector<Interval> exclusion_windows(double t, const PhaseSource& source)
{
    const CavityParams& params = source.params();
    const double delta = source.options().exclusion_delta * params.l0;
    std::vector<Interval> out;
    if (params.epsilon == 0.0 || delta <= 0.0) {
        return out;
    }
    const double wall = mirror_position(t, params);
    const double pad = delta * (1.0 + 1e-9);
    // Windows are not clipped to the cavity, so a ray hitting a wall still
    // covers the wall point itself.
    auto add = [&](double x) { out.push_back({x - pad, x + pad}); };
    // rays u = (2p+1) L0 with |u - t| <= L + delta
    const double lo = t - wall - pad;
    const double hi = t + wall + pad;
    const auto pmin = static_cast<long>(std::max(0.0, std::floor((lo / params.l0 - 1.0) / 2.0)));
    const auto pmax = static_cast<long>(std::ceil((hi / params.l0 - 1.0) / 2.0));
    for (long p = pmin; p <= pmax; ++p) {
        const double ray = (2.0 * static_cast<double>(p) + 1.0) * params.l0;
        if (ray >= lo && ray <= hi) {
            if (ray - t >= -pad) {
                add(ray - t);
            }
            if (t - ray >= -pad) {
                add(t - ray);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> merged;
    for (const Interval& w : out) {
        if (!merged.empty() && w.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, w.hi);
        } else {
            merged.push_back(w);
        }
    }
    return merged;
}

EnergyProfile energy_profile(double t, std::size_t n, const PhaseSource& source)
{
    if (n < 16) {
        throw DomainError("energy_profile: at least 16 samples required");
    }
    EnergyProfile profile;
    profile.t = t;
    profile.method = source.method();
    profile.excluded = exclusion_windows(t, source);

    const std::vector<double> grid = kernels::linspace(0.0, mirror_position(t, source.params()), n);
    std::vector<double> keep;
    keep.reserve(n);
    for (double x : grid) {
        if (in_any(profile.excluded, x)) {
            profile.dropped.push_back(x);
        } else {
            keep.push_back(x);
        }
    }
    const std::vector<double> values = kernels::density_over_x(t, keep, source);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (std::isfinite(values[i])) {
            profile.xs.push_back(keep[i]);
            profile.t00.push_back(values[i]);
        } else {
            profile.dropped.push_back(keep[i]);
        }
    }
    std::sort(profile.dropped.begin(), profile.dropped.end());
    return profile;
}

double total_energy(double t, const PhaseSource& source, int panels)
{
    constexpr int depth_cap = 12;
    constexpr int forced_depth = 3;
    if (panels < 64) {
        throw DomainError("total_energy: at least 64 panels required");
    }
    const double wall = mirror_position(t, source.params());
    const std::vector<Interval> windows = exclusion_windows(t, source);

    // Edge values for bridging each window. A window clipped by a wall has
    // one usable edge and is bridged with that constant.
    struct Bridge {
        Interval w;
        double lo_value;
        double hi_value;
    };
    std::vector<Bridge> bridges;
    for (const Interval& w : windows) {
        const bool lo_ok = w.lo > 0.0;
        const bool hi_ok = w.hi < wall;
        const double vlo = lo_ok ? energy_density(w.lo, t, source) : std::numeric_limits<double>::quiet_NaN();
        const double vhi = hi_ok ? energy_density(w.hi, t, source) : std::numeric_limits<double>::quiet_NaN();
        bridges.push_back({w, lo_ok ? vlo : vhi, hi_ok ? vhi : vlo});
    }
    auto integrand = [&](double x) {
        for (const Bridge& b : bridges) {
            if (b.w.contains(x)) {
                if (b.w.hi == b.w.lo) {
                    return b.lo_value;
                }
                return b.lo_value + (b.hi_value - b.lo_value) * (x - b.w.lo) / (b.w.hi - b.w.lo);
            }
        }
        return energy_density(x, t, source);
    };

    const auto np = static_cast<std::size_t>(panels);
    const double h = wall / static_cast<double>(np);
    std::vector<double> nodes(2 * np + 1);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        nodes[k] = 0.5 * h * static_cast<double>(k);
    }
    nodes.back() = wall;
    std::vector<double> f(nodes.size());
    kernels::parallel_for(nodes.size(), [&](std::size_t k) { f[k] = integrand(nodes[k]); });

    std::vector<double> simpson(np);
    std::vector<double> curvature(np);
    double fmax = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
        const double a = f[2 * i];
        const double m = f[2 * i + 1];
        const double b = f[2 * i + 2];
        simpson[i] = h / 6.0 * (a + 4.0 * m + b);
        curvature[i] = std::abs(a - 2.0 * m + b);
        fmax = std::max({fmax, std::abs(a), std::abs(m), std::abs(b)});
    }
    const double trigger = 10.0 * median(curvature) + 1e-13 * fmax;
    std::vector<std::size_t> flagged;
    for (std::size_t i = 0; i < np; ++i) {
        if (curvature[i] > trigger) {
            flagged.push_back(i);
        }
    }

    const double coarse = std::accumulate(simpson.begin(), simpson.end(), 0.0);
    const double scale = std::abs(coarse) + std::abs(static_energy_density(source.params().l0)) * wall;
    const double tol = 1e-10 * scale;

    std::vector<double> refined(flagged.size());
    std::vector<double> unresolved(flagged.size(), 0.0);
    kernels::parallel_for(flagged.size(), [&](std::size_t k) {
        const std::size_t i = flagged[k];
        double lost = 0.0;
        auto recurse = [&](auto&& self, double a, double b, double fa, double fm, double fb, double whole,
                           double eps, int depth) -> double {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m);
            const double rm = 0.5 * (m + b);
            const double flm = integrand(lm);
            const double frm = integrand(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double diff = left + right - whole;
            if (depth >= depth_cap) {
                lost += std::abs(diff) / 15.0;
                return left + right;
            }
            if (depth >= forced_depth && std::abs(diff) <= 15.0 * eps) {
                return left + right + diff / 15.0;
            }
            return self(self, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
                   self(self, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
        };
        const double a = nodes[2 * i];
        const double b = nodes[2 * i + 2];
        refined[k] = recurse(recurse, a, b, f[2 * i], f[2 * i + 1], f[2 * i + 2], simpson[i],
                             tol / static_cast<double>(flagged.size()), 0);
        unresolved[k] = lost;
    });

    double total = coarse;
    double lost = 0.0;
    for (std::size_t k = 0; k < flagged.size(); ++k) {
        total += refined[k] - simpson[flagged[k]];
        lost += unresolved[k];
    }
    if (lost > 1e-6 * (std::abs(total) + std::abs(static_energy_density(source.params().l0)) * wall)) {
        throw QuadratureFailure("total_energy: refinement hit the depth cap with unresolved error " +
                                std::to_string(lost));
    }
    return total;
}

PeakReport peak_analysis(const EnergyProfile& profile, double threshold)
{
    check_peak_inputs(profile, threshold);
    const std::span<const double> xs(profile.xs);
    const std::span<const double> ys(profile.t00);
    const double bg0 = median(profile.t00);
    const double top = *std::max_element(ys.begin(), ys.end());
    if (!(top - bg0 > 1e-9 * std::max(std::abs(bg0), 1e-300))) {
        throw NoPeaks("no peaks: profile is flat");
    }
    const double level = bg0 + threshold * (top - bg0);

    auto widths_against = [&](double background) {
        std::vector<Candidate> cands;
        for (std::size_t i : local_maxima(ys)) {
            if (ys[i] <= level) {
                continue;
            }
            const double half = background + 0.5 * (ys[i] - background);
            const Crossings c = half_max_crossings(xs, ys, i, half);
            const double left = c.left.value_or(xs.front());
            const double right = c.right.value_or(xs.back());
            cands.push_back({xs[i], ys[i], right - left});
        }
        return merge_candidates(std::move(cands));
    };

    std::vector<Candidate> peaks = widths_against(bg0);
    if (peaks.empty()) {
        throw NoPeaks("no peaks above threshold");
    }
    const double spacing = profile_spacing(profile);
    const double background = inter_peak_background(profile, peaks, spacing);
    peaks = widths_against(background);
    return to_report(peaks, background);
}

PeakReport resolved_peaks(double t, const PhaseSource& source, std::size_t n, double threshold)
{
    constexpr std::size_t zoom_samples = 129;
    constexpr int max_zooms = 60;
    constexpr std::size_t max_candidates = 64;

    const EnergyProfile profile = energy_profile(t, n, source);
    check_peak_inputs(profile, threshold);
    const std::span<const double> xs(profile.xs);
    const std::span<const double> ys(profile.t00);
    const double bg0 = median(profile.t00);
    const double wall = mirror_position(t, source.params());
    const double spacing = profile_spacing(profile);

    std::vector<std::size_t> starts;
    for (std::size_t i : local_maxima(ys)) {
        if (ys[i] > bg0) {
            starts.push_back(i);
        }
    }
    std::sort(starts.begin(), starts.end(), [&](std::size_t a, std::size_t b) { return ys[a] > ys[b]; });
    if (starts.size() > max_candidates) {
        starts.resize(max_candidates);
    }

    auto zoom = [&](double center, double half_window) -> Candidate {
        double c = center;
        double w = half_window;
        Candidate best{center, -std::numeric_limits<double>::infinity(), 0.0};
        for (int it = 0; it < max_zooms; ++it) {
            const double lo = std::max(0.0, c - w);
            const double hi = std::min(wall, c + w);
            const std::vector<double> grid = kernels::linspace(lo, hi, zoom_samples);
            const std::vector<double> vals = kernels::density_over_x(t, grid, source);
            std::size_t j = 0;
            double vmax = -std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < vals.size(); ++k) {
                if (!std::isnan(vals[k]) && vals[k] > vmax) {
                    vmax = vals[k];
                    j = k;
                }
            }
            if (!std::isfinite(vmax)) {
                return best;
            }
            const double step = (hi - lo) / static_cast<double>(zoom_samples - 1);
            const double half = bg0 + 0.5 * (vmax - bg0);
            const Crossings cr = half_max_crossings(grid, vals, j, half);
            const bool left_wall = !cr.left && lo <= 0.0;
            const bool right_wall = !cr.right && hi >= wall;
            const double left = cr.left ? *cr.left : lo;
            const double right = cr.right ? *cr.right : hi;
            best = {grid[j], vmax, right - left};
            if ((cr.left || left_wall) && (cr.right || right_wall)) {
                const double fw = right - left;
                if (fw >= 16.0 * step) {
                    // Final pass pins the height on a window a few samples wide.
                    const double plo = std::max(0.0, grid[j] - 2.0 * step);
                    const double phi = std::min(wall, grid[j] + 2.0 * step);
                    const std::vector<double> g2 = kernels::linspace(plo, phi, zoom_samples);
                    const std::vector<double> v2 = kernels::density_over_x(t, g2, source);
                    for (std::size_t k = 0; k < v2.size(); ++k) {
                        if (!std::isnan(v2[k]) && v2[k] > best.height) {
                            best.height = v2[k];
                            best.x = g2[k];
                        }
                    }
                    return best;
                }
                c = grid[j];
                w = std::max(2.0 * fw, 8.0 * step);
            } else {
                c = grid[j];
                w *= 4.0;
            }
        }
        return best;
    };

    std::vector<Candidate> cands;
    for (std::size_t i : starts) {
        cands.push_back(zoom(xs[i], 1.5 * spacing));
    }
    if (cands.empty()) {
        throw NoPeaks("no peaks: profile has no maxima above its median");
    }
    double top = -std::numeric_limits<double>::infinity();
    for (const Candidate& c : cands) {
        top = std::max(top, c.height);
    }
    if (!(top - bg0 > 1e-9 * std::max(std::abs(bg0), 1e-300))) {
        throw NoPeaks("no peaks: profile is flat");
    }
    const double level = bg0 + threshold * (top - bg0);
    std::vector<Candidate> kept;
    for (const Candidate& c : cands) {
        if (c.height > level) {
            kept.push_back(c);
        }
    }
    kept = merge_candidates(std::move(kept));
    if (kept.empty()) {
        throw NoPeaks("no peaks above threshold");
    }
    return to_report(kept, inter_peak_background(profile, kept, spacing));
}

GrowthFit growth_fit(std::span<const double> ts, std::span<const double> values)
{
    if (ts.size() != values.size()) {
        throw DomainError("growth_fit: time and value lists differ in length");
    }
    if (ts.size() < 4) {
        throw DomainError("growth_fit: at least 4 samples required");
    }
    const bool positive = values.front() > 0.0;
    for (double v : values) {
        if (!(std::isfinite(v) && v != 0.0 && (v > 0.0) == positive)) {
            throw SignMixture("growth_fit: values must be finite, non-zero and of one sign");
        }
    }
    const auto n = static_cast<double>(ts.size());
    double st = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sy += std::log(std::abs(values[i]));
    }
    const double tm = st / n;
    const double ym = sy / n;
    double stt = 0.0;
    double sty = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double dt = ts[i] - tm;
        stt += dt * dt;
        sty += dt * (std::log(std::abs(values[i])) - ym);
    }
    if (!(stt > 0.0)) {
        throw DomainError("growth_fit: sample times must not all coincide");
    }
    GrowthFit fit;
    fit.rate = sty / stt;
    fit.intercept = ym - fit.rate * tm;
    double ss = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double r = std::log(std::abs(values[i])) - (fit.intercept + fit.rate * ts[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

}  // namespace moore
