// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "moore/phase_source.hpp"

namespace moore {

/// Static Casimir energy density -pi / (24 L0^2).
double static_energy_density(double l0) noexcept;

/// f(u) = (1/24pi) [R'''/R' - (3/2)(R''/R')^2 + (pi^2/2) R'^2].
/// Throws SingularPoint inside an exclusion window, NonpositiveDerivative
/// when R'(u) <= 0.
double f_of_u(double u, const PhaseSource& source);

/// Renormalised <T00(x,t)> = -f(t+x) - f(t-x), for 0 <= x <= L(t).
/// A SingularPoint is rethrown with ray() set to "t+x" or "t-x".
double energy_density(double x, double t, const PhaseSource& source);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const noexcept { return x > lo && x < hi; }
};

/// x-intervals whose null coordinates t +- x fall inside an exclusion window,
/// sorted and merged. Intervals at a wall extend past it. Empty when eps = 0.
std::vector<Interval> exclusion_windows(double t, const PhaseSource& source);

struct EnergyProfile {
    double t = 0.0;
    std::vector<double> xs;
    std::vector<double> t00;
    std::vector<Interval> excluded;
    std::vector<double> dropped;  ///< grid positions skipped as excluded
    SolutionMethod method = SolutionMethod::Exact;
};

/// Uniform n-point grid on [0, L(t)] minus the exclusion windows. n >= 16.
EnergyProfile energy_profile(double t, std::size_t n, const PhaseSource& source);

/// Integral of T00 over [0, L(t)]: composite Simpson on `panels` panels
/// (>= 64) with dyadic refinement, up to depth 12, of panels whose second
/// difference exceeds 10x the median. Exclusion windows are bridged linearly.
double total_energy(double t, const PhaseSource& source, int panels = 4096);

struct PeakReport {
    std::size_t count = 0;
    std::vector<double> positions;
    std::vector<double> heights;
    std::vector<double> widths;  ///< FWHM above background
    double background = 0.0;     ///< median of inter-peak samples
};

/// Peaks of a sampled profile: local maxima above
/// background + threshold (max - background), FWHM by linear interpolation.
/// Requires >= 64 retained samples and 0 < threshold < 1; throws NoPeaks
/// when nothing qualifies.
PeakReport peak_analysis(const EnergyProfile& profile, double threshold);

/// As peak_analysis on energy_profile(t, n), but each candidate maximum is
/// re-sampled on successively narrower windows until its FWHM spans several
/// samples. Needed once peaks become narrower than the grid spacing.
PeakReport resolved_peaks(double t, const PhaseSource& source, std::size_t n, double threshold);

struct GrowthFit {
    double rate = 0.0;       ///< slope of ln|value| vs t
    double intercept = 0.0;
    double residual = 0.0;   ///< RMS of the log-residuals
};

/// Least-squares line through (t, ln|value|). Needs >= 4 samples
/// (DomainError) of one sign (SignMixture).
GrowthFit growth_fit(std::span<const double> ts, std::span<const double> values);

}  // namespace moore
