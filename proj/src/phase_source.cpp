// SPDX-License-Identifier: Apache-2.0
#include "moore/phase_source.hpp"

#include <cmath>

#include "moore/analytic.hpp"
#include "moore/errors.hpp"
#include "moore/exact.hpp"
#include "moore/motion.hpp"

namespace moore {

PhaseSource::PhaseSource(const CavityParams& params, SolutionMethod method, SolverOptions options)
    : params_(params), method_(method), options_(options)
{
    params_.validate();
    if (!(options_.tol > 0.0)) {
        throw InvalidParams("solver options: tol > 0 required");
    }
    if (!(options_.exclusion_delta >= 0.0)) {
        throw InvalidParams("solver options: exclusion delta >= 0 required");
    }
    if (options_.jmax < 1) {
        throw InvalidParams("solver options: jmax >= 1 required");
    }
}

double PhaseSource::value(double t) const
{
    switch (method_) {
    case SolutionMethod::Exact:
        return exact_R(t, params_, options_);
    case SolutionMethod::Perturbative:
        return perturbative_R(t, params_);
    case SolutionMethod::RGImproved:
        return rg_R(t, params_);
    }
    return std::nan("");
}

PhaseSample PhaseSource::sample(double t) const
{
    switch (method_) {
    case SolutionMethod::Exact:
        return exact_sample(t, params_, options_);
    case SolutionMethod::Perturbative:
        return perturbative_sample(t, params_, options_);
    case SolutionMethod::RGImproved:
        return rg_sample(t, params_, options_);
    }
    return {};
}

std::complex<double> mode_value(int k, double x, double t, const PhaseSource& source)
{
    if (k < 1) {
        throw DomainError("mode_value: k >= 1 required");
    }
    const CavityParams& params = source.params();
    const double wall = mirror_position(t, params);
    const double slack = 1e-12 * params.l0;
    if (x < -slack || x > wall + slack) {
        throw DomainError("mode_value: x must lie inside the cavity [0, L(t)]");
    }
    const double kpi = k * pi;
    const double a = kpi * source.value(t + x);
    const double b = kpi * source.value(t - x);
    // e^{-ia} - e^{-ib} = -2i sin((a-b)/2) e^{-i(a+b)/2}; the difference form
    // keeps the boundary value at rounding level when R(t+L) - R(t-L) = 2.
    const std::complex<double> diff =
        std::complex<double>(0.0, -2.0 * std::sin(0.5 * (a - b))) * std::polar(1.0, -0.5 * (a + b));
    return std::complex<double>(0.0, 1.0 / std::sqrt(4.0 * pi * k)) * diff;
}

}  // namespace moore
