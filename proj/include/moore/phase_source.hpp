// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include "moore/cavity.hpp"

namespace moore {

/// A phase evaluator bound to one cavity, one method and one set of options.
/// Immutable and cheap to copy; safe to share across threads.
class PhaseSource {
public:
    PhaseSource(const CavityParams& params, SolutionMethod method, SolverOptions options = {});

    const CavityParams& params() const noexcept { return params_; }
    SolutionMethod method() const noexcept { return method_; }
    const SolverOptions& options() const noexcept { return options_; }

    double value(double t) const;
    PhaseSample sample(double t) const;

private:
    CavityParams params_;
    SolutionMethod method_;
    SolverOptions options_;
};

/// Mode function (i / sqrt(4 pi k)) (e^{-i k pi R(t+x)} - e^{-i k pi R(t-x)}).
/// Requires k >= 1 and 0 <= x <= L(t) (DomainError otherwise).
std::complex<double> mode_value(int k, double x, double t, const PhaseSource& source);

}  // namespace moore
