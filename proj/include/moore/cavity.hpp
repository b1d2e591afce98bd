// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numbers>
#include <string_view>

namespace moore {

inline constexpr double pi = std::numbers::pi;

/// Resonantly driven cavity: the mirror at x = L(t) follows
/// L(t) = L0 [1 + epsilon sin(q pi t / L0)] for t >= 0 and rests at L0 before.
///
/// Invariants (checked by validate()): L0 > 0, q >= 1, 0 <= epsilon < 1 and
/// epsilon q pi < 1. The last one keeps the mirror subluminal and makes
/// u -> u + L(u) strictly increasing, which the exact solver relies on.
struct CavityParams {
    double l0 = 1.0;
    double epsilon = 0.0;
    int q = 1;

    /// Validating constructor; throws InvalidParams naming the broken invariant.
    static CavityParams make(double l0, double epsilon, int q);

    void validate() const;

    /// Mirror angular frequency q pi / L0.
    double omega() const noexcept { return q * pi / l0; }
    /// (-1)^{q+1}: +1 for odd q (xi grows), -1 for even q (xi decays).
    int parity_sign() const noexcept { return (q % 2 == 1) ? 1 : -1; }
};

/// t = 2 p L0 + z with -L0 <= z <= L0.
struct FoldedTime {
    long p = 0;
    double z = 0.0;
};

enum class SolutionMethod { Exact, Perturbative, RGImproved };

/// CLI spelling: "exact", "pert", "rg".
std::string_view to_string(SolutionMethod method) noexcept;
/// Accepts the CLI spelling; throws DomainError otherwise.
SolutionMethod parse_method(std::string_view name);

/// R and its first three derivatives at one time.
/// When near_ray is set the derivatives are NaN (the sample lies inside an
/// exclusion window around t = (2p+1)L0). in_validity is false when t lies
/// beyond the method's stated range (eps t/L0 < 1 perturbative,
/// eps^2 t/L0 < 1 RG).
struct PhaseSample {
    double t = 0.0;
    double r = 0.0;
    double dr = 0.0;
    double d2r = 0.0;
    double d3r = 0.0;
    SolutionMethod method = SolutionMethod::Exact;
    bool near_ray = false;
    bool in_validity = true;
};

/// Numerical knobs shared by every evaluator.
struct SolverOptions {
    double tol = 1e-12;             ///< root-find residual, in units of L0
    int max_iterations = 200;       ///< per bounce
    double exclusion_delta = 1e-3;  ///< half-width around singular rays, units of L0
    int jmax = 200;                 ///< RG coefficient series length
};

}  // namespace moore
