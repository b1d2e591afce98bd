// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "moore/cavity.hpp"

namespace moore {

/// Backward null-ray history of a time t.
///
/// Starting from s = t, each bounce solves u + L(u) = s and continues from
/// s <- u - L(u) until s falls in [-L0, L0]. `feet` holds the solved u values
/// outermost first and `base` the final s.
struct BounceChain {
    std::vector<double> feet;
    double base = 0.0;

    std::size_t bounces() const noexcept { return feet.size(); }
};

/// Throws DomainError for t < -L0 and ConvergenceFailure when a bounce's
/// root-find exceeds options.max_iterations.
BounceChain trace_bounces(double t, const CavityParams& params, const SolverOptions& options = {});

/// R(t) from the functional equation R(t + L(t)) - R(t - L(t)) = 2 with
/// R(t) = t/L0 on [-L0, L0].
double exact_R(double t, const CavityParams& params, const SolverOptions& options = {});

/// R'(t), the product of (1 - L'(u)) / (1 + L'(u)) over the bounces times 1/L0.
/// Throws SingularPoint within 1e-6 L0 of t = (2p+1) L0 when eps > 0.
double exact_dR(double t, const CavityParams& params, const SolverOptions& options = {});

/// R, R', R'', R''' by chain-rule propagation through the bounce chain.
/// Derivatives are one-sided limits on the singular rays; the sample is
/// flagged near_ray (derivatives set to NaN) inside options.exclusion_delta.
PhaseSample exact_sample(double t, const CavityParams& params, const SolverOptions& options = {});

}  // namespace moore
