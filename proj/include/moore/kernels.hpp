// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>
#include <vector>

#include "moore/phase_source.hpp"

// Grid kernels. Each OpenMP kernel has a serial twin with identical
// semantics; results agree bit for bit because every element is a pure
// function of its own grid point.
namespace moore::kernels {

/// Thread count: MOORE_CAVITY_THREADS when set and positive, else the
/// OpenMP default. Always 1 in builds without OpenMP.
int thread_count();

std::vector<PhaseSample> phase_grid(std::span<const double> ts, const PhaseSource& source);
std::vector<PhaseSample> phase_grid_serial(std::span<const double> ts, const PhaseSource& source);

/// R only, no derivatives.
std::vector<double> value_grid(std::span<const double> ts, const PhaseSource& source);
std::vector<double> value_grid_serial(std::span<const double> ts, const PhaseSource& source);

/// T00 at fixed t over positions xs. Points inside an exclusion window come
/// back as NaN; any other failure is rethrown after the loop.
std::vector<double> density_over_x(double t, std::span<const double> xs, const PhaseSource& source);
std::vector<double> density_over_x_serial(double t, std::span<const double> xs,
                                          const PhaseSource& source);

/// T00 at fixed x over times ts, same NaN convention.
std::vector<double> density_over_t(double x, std::span<const double> ts, const PhaseSource& source);
std::vector<double> density_over_t_serial(double x, std::span<const double> ts,
                                          const PhaseSource& source);

/// Uniform grid of `count` points on [start, end], end included. count >= 2.
std::vector<double> linspace(double start, double end, std::size_t count);

}  // namespace moore::kernels

namespace moore::kernels {

/// Runs body(i) for i in [0, n) on the kernel thread team. Iterations must
/// touch only their own output slot. The first exception raised by any
/// iteration is rethrown once the loop finishes.
template <class Body>
void parallel_for(std::size_t n, Body&& body)
{
    std::exception_ptr failure;
    std::mutex guard;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(thread_count())
    for (long long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard<std::mutex> lock(guard);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace moore::kernels
