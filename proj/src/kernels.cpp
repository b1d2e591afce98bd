// SPDX-License-Identifier: Apache-2.0
#include "moore/kernels.hpp"

#include <cstdlib>
#include <limits>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "moore/errors.hpp"
#include "moore/observables.hpp"

namespace moore::kernels {

int thread_count()
{
#ifdef _OPENMP
    if (const char* env = std::getenv("MOORE_CAVITY_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) {
                return n;
            }
        } catch (const std::exception&) {
            // unparsable: fall through to the default
        }
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

double density_or_nan(double x, double t, const PhaseSource& source)
{
    try {
        return energy_density(x, t, source);
    } catch (const SingularPoint&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace

std::vector<PhaseSample> phase_grid(std::span<const double> ts, const PhaseSource& source)
{
    std::vector<PhaseSample> out(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) { out[i] = source.sample(ts[i]); });
    return out;
}

std::vector<PhaseSample> phase_grid_serial(std::span<const double> ts, const PhaseSource& source)
{
    std::vector<PhaseSample> out;
    out.reserve(ts.size());
    for (double t : ts) {
        out.push_back(source.sample(t));
    }
    return out;
}

std::vector<double> value_grid(std::span<const double> ts, const PhaseSource& source)
{
    std::vector<double> out(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) { out[i] = source.value(ts[i]); });
    return out;
}

std::vector<double> value_grid_serial(std::span<const double> ts, const PhaseSource& source)
{
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) {
        out.push_back(source.value(t));
    }
    return out;
}

std::vector<double> density_over_x(double t, std::span<const double> xs, const PhaseSource& source)
{
    std::vector<double> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { out[i] = density_or_nan(xs[i], t, source); });
    return out;
}

std::vector<double> density_over_x_serial(double t, std::span<const double> xs,
                                          const PhaseSource& source)
{
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) {
        out.push_back(density_or_nan(x, t, source));
    }
    return out;
}

std::vector<double> density_over_t(double x, std::span<const double> ts, const PhaseSource& source)
{
    std::vector<double> out(ts.size());
    parallel_for(ts.size(), [&](std::size_t i) { out[i] = density_or_nan(x, ts[i], source); });
    return out;
}

std::vector<double> density_over_t_serial(double x, std::span<const double> ts,
                                          const PhaseSource& source)
{
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) {
        out.push_back(density_or_nan(x, t, source));
    }
    return out;
}

std::vector<double> linspace(double start, double end, std::size_t count)
{
    if (count < 2) {
        throw DomainError("linspace: count >= 2 required");
    }
    std::vector<double> out(count);
    const double step = (end - start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = start + step * static_cast<double>(i);
    }
    out.back() = end;
    return out;
}

}  // namespace moore::kernels
