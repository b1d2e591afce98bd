// SPDX-License-Identifier: Apache-2.0
#include "moore/rayleigh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "moore/errors.hpp"

namespace moore::rayleigh {

namespace {

using State = std::array<double, 2>;

State rhs(const State& s, double eps)
{
    const double v = s[1];
    return {v, -s[0] - eps * (v * v * v / 3.0 - v)};
}

State rk4_step(const State& s, double h, double eps)
{
    const State k1 = rhs(s, eps);
    const State k2 = rhs({s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1]}, eps);
    const State k3 = rhs({s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1]}, eps);
    const State k4 = rhs({s[0] + h * k3[0], s[1] + h * k3[1]}, eps);
    return {s[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            s[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

constexpr double local_error_limit = 1e-8;

// Advances by h in `pieces` equal substeps, each Richardson-checked.
// Returns false if any substep's error estimate exceeds the limit.
bool checked_advance(State& s, double h, int pieces, double eps)
{
    State cur = s;
    const double sub = h / pieces;
    for (int k = 0; k < pieces; ++k) {
        const State full = rk4_step(cur, sub, eps);
        const State half = rk4_step(rk4_step(cur, 0.5 * sub, eps), 0.5 * sub, eps);
        const double err = std::max(std::abs(half[0] - full[0]), std::abs(half[1] - full[1])) / 15.0;
        if (!(err <= local_error_limit)) {
            return false;
        }
        cur = half;
    }
    s = cur;
    return true;
}

}  // namespace

void Params::validate() const
{
    if (!(std::isfinite(epsilon) && epsilon > 0.0)) {
        throw InvalidParams("rayleigh: epsilon > 0 required");
    }
    if (!(std::isfinite(t0) && std::isfinite(a))) {
        throw InvalidParams("rayleigh: t0 and a must be finite");
    }
}

std::string_view to_string(Method method) noexcept
{
    switch (method) {
    case Method::Perturbative:
        return "pert";
    case Method::RGImproved:
        return "rg";
    case Method::NumericOracle:
        return "oracle";
    }
    return "unknown";
}

double perturbative_y(double t, const Params& params)
{
    const double y0 = 2.0 * params.a;
    const double phase = t - params.t0;  // t + Theta0
    const double secular = 0.5 * y0 * (1.0 - 0.25 * y0 * y0) * (t - params.t0) * std::sin(phase);
    const double harmonic = y0 * y0 * y0 / 96.0 * (std::cos(3.0 * phase) - std::cos(phase));
    return y0 * std::sin(phase) + params.epsilon * (secular + harmonic);
}

Flow amplitude_flow(double tau, const Params& params)
{
    const double y0 = 2.0 * params.a;
    const double decay = std::exp(-params.epsilon * (tau - params.t0));
    const double amplitude = y0 / std::sqrt(decay + 0.25 * y0 * y0 * (1.0 - decay));
    return {amplitude, -params.t0};
}

double improved_y(double t, const Params& params)
{
    const double y = amplitude_flow(t, params).amplitude;
    const double phase = t - params.t0;
    return y * std::sin(phase) + params.epsilon * y * y * y / 96.0 * (std::cos(3.0 * phase) - std::cos(phase));
}

std::vector<TrajectorySample> numeric_oracle(double t_end, const Params& params, double dt)
{
    params.validate();
    if (!(dt > 0.0 && dt <= 0.01)) {
        throw DomainError("rayleigh oracle: 0 < dt <= 0.01 required");
    }
    if (!(t_end >= params.t0)) {
        throw DomainError("rayleigh oracle: t_end >= t0 required");
    }
    const auto steps = static_cast<std::size_t>(std::ceil((t_end - params.t0) / dt - 1e-9));
    std::vector<TrajectorySample> out;
    out.reserve(steps + 1);
    State s{0.0, 2.0 * params.a};
    out.push_back({params.t0, s[0], s[1], Method::NumericOracle});
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t_prev = out.back().t;
        const double t_next = std::min(t_end, params.t0 + dt * static_cast<double>(k));
        const double h = t_next - t_prev;
        if (!checked_advance(s, h, 1, params.epsilon) && !checked_advance(s, h, 2, params.epsilon) &&
            !checked_advance(s, h, 4, params.epsilon)) {
            throw StepSizeFailure("rayleigh oracle: local error above 1e-8 even at dt/4 (t = " +
                                  std::to_string(t_prev) + ")");
        }
        out.push_back({t_next, s[0], s[1], Method::NumericOracle});
    }
    return out;
}

double trailing_amplitude(std::span<const TrajectorySample> samples, int periods)
{
    if (samples.empty() || periods < 1) {
        throw DomainError("trailing_amplitude: need samples and periods >= 1");
    }
    const double start = samples.back().t - periods * 2.0 * std::numbers::pi;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const TrajectorySample& s : samples) {
        if (s.t >= start) {
            lo = std::min(lo, s.y);
            hi = std::max(hi, s.y);
        }
    }
    return 0.5 * (hi - lo);
}

}  // namespace moore::rayleigh
