// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string_view>
#include <vector>

// Rayleigh oscillator  y'' + y + eps (y'^3/3 - y') = 0  with y(t0) = 0,
// y'(t0) = 2a: naive first-order solution, RG-resummed solution and a
// fixed-step RK4 reference.
namespace moore::rayleigh {

struct Params {
    double epsilon = 0.1;
    double t0 = 0.0;
    double a = 0.5;

    /// Throws InvalidParams unless epsilon > 0 and all fields are finite.
    void validate() const;
};

enum class Method { Perturbative, RGImproved, NumericOracle };

std::string_view to_string(Method method) noexcept;

struct TrajectorySample {
    double t = 0.0;
    double y = 0.0;
    double ydot = 0.0;
    Method method = Method::NumericOracle;
};

/// First-order solution with the secular (t - t0) term, Y0 = 2a, Theta0 = -t0.
double perturbative_y(double t, const Params& params);

/// Renormalised amplitude and phase at scale tau.
struct Flow {
    double amplitude = 0.0;
    double phase = 0.0;
};

/// Y(tau) = Y0 [e^{-eps(tau-t0)} + (Y0^2/4)(1 - e^{-eps(tau-t0)})]^{-1/2},
/// Theta(tau) = -t0.
Flow amplitude_flow(double tau, const Params& params);

/// y = Y(t) sin(t - t0) + eps (Y^3/96) [cos 3(t - t0) - cos(t - t0)].
double improved_y(double t, const Params& params);

/// Classical RK4 from (t0, 0, 2a) to t_end with step dt <= 0.01. Every step is
/// checked against two half steps (Richardson); a failing step is retried at
/// dt/2 and dt/4 before StepSizeFailure. One sample per step, t0 included.
std::vector<TrajectorySample> numeric_oracle(double t_end, const Params& params, double dt);

/// Half the peak-to-peak excursion of y over the trailing `periods` 2pi periods.
double trailing_amplitude(std::span<const TrajectorySample> samples, int periods = 5);

}  // namespace moore::rayleigh
