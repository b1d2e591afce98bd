// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "moore/cavity.hpp"

namespace moore {

/// First-order perturbative phase, secular term included:
/// R = t/L0 + eps (-1)^{q+1} [(t/L0) sin(q pi t/L0) - (z/L0) sin(q pi z/L0)].
double perturbative_R(double t, const CavityParams& params);
PhaseSample perturbative_sample(double t, const CavityParams& params,
                                const SolverOptions& options = {});

/// ln xi = (-1)^{q+1} pi q eps t / L0.
double log_xi(double t, const CavityParams& params) noexcept;
/// xi itself. Overflows to +inf for odd q at very long times; the RG
/// evaluators below never form it directly.
double xi(double t, const CavityParams& params) noexcept;

/// RG-improved phase R_s + R_np. Returns t/L0 on the initial interval.
double rg_R(double t, const CavityParams& params);
/// The secular-free part R_s alone (t/L0 on the initial interval).
double rg_R_s(double t, const CavityParams& params);
/// The non-periodic part R_np alone (0 on the initial interval).
double rg_R_np(double t, const CavityParams& params);

struct RgDerivatives {
    double dr = 0.0;
    double d2r = 0.0;
    double d3r = 0.0;
};

/// Derivatives of R_s with xi held fixed. R_np is not differentiated.
RgDerivatives rg_derivatives(double t, const CavityParams& params);

PhaseSample rg_sample(double t, const CavityParams& params, const SolverOptions& options = {});

/// Flowing Fourier coefficients of the resummed solution at time t.
/// Only multiples of q are non-zero, a_qj[j-1] = (2/(pi q j)) tanh^j(q tau*).
/// The B coefficients and A_{m<0} vanish identically and are not stored.
struct RGCoefficients {
    double tau_star = 0.0;  ///< t eps pi (-1)^{q+1} / (2 L0)
    double xi = 1.0;
    double log_xi = 0.0;
    double a0 = 0.0;        ///< -(2/(pi q)) ln cosh(q tau*)
    std::vector<double> a_qj;
};

/// jmax >= 1 (DomainError otherwise). The list stops early once
/// |tanh|^j < 1e-16.
RGCoefficients rg_coefficients(double t, const CavityParams& params, int jmax = 200);

/// sum_j a_qj sin(q j pi t / L0) over the stored coefficients.
double rg_series_partial_sum(const RGCoefficients& coeffs, double t, const CavityParams& params);
/// -(2/(pi q)) Im ln[1 + xi + (1 - xi) e^{i q pi t / L0}].
double rg_series_closed_form(double t, const CavityParams& params);
/// Rigorous bound on the dropped tail, sum_{j > n} |a_qj| for n stored terms.
double rg_series_tail_bound(const RGCoefficients& coeffs, const CavityParams& params);

}  // namespace moore
