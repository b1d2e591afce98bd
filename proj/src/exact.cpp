// SPDX-License-Identifier: Apache-2.0
#include "moore/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "moore/errors.hpp"
#include "moore/motion.hpp"

namespace moore {

namespace {

// Solves u + L(u) = s. The map is strictly increasing (1 + L' > 0), and the
// root lies in [s - L0(1+eps), s - L0(1-eps)]. Newton steps are kept inside
// the bracket, falling back to bisection when they leave it.
double solve_foot(double s, const CavityParams& params, const SolverOptions& options)
{
    const double l0 = params.l0;
    double lo = s - l0 * (1.0 + params.epsilon);
    double hi = s - l0 * (1.0 - params.epsilon);
    double u = std::clamp(s - mirror_position(s - l0, params), lo, hi);
    const double tol = options.tol * l0;

    for (int it = 0; it < options.max_iterations; ++it) {
        const MirrorJet jet = mirror_jet(u, params);
        const double g = u + jet.l - s;
        if (g == 0.0) {
            return u;
        }
        if (g > 0.0) {
            hi = u;
        } else {
            lo = u;
        }
        double next = u - g / (1.0 + jet.dl);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        const double step = next - u;
        u = next;
        // One Newton step past |g| < tol lands at machine precision.
        if (std::abs(g) < tol && std::abs(step) < tol) {
            return u;
        }
        if (hi - lo <= std::numeric_limits<double>::epsilon() * std::abs(u)) {
            return u;
        }
    }
    std::ostringstream os;
    os << "exact solver: root-find for u + L(u) = " << s << " did not converge in "
       << options.max_iterations << " iterations";
    throw ConvergenceFailure(os.str());
}

// Jet of the single-bounce map phi(t) = u - L(u), u + L(u) = t.
struct BounceJet {
    double d1, d2, d3;
};

BounceJet bounce_jet(double u, const CavityParams& params)
{
    const MirrorJet m = mirror_jet(u, params);
    const double u1 = 1.0 / (1.0 + m.dl);
    const double u2 = -m.d2l * u1 * u1 * u1;
    const double u3 = -m.d3l * u1 * u1 * u1 * u1 + 3.0 * m.d2l * m.d2l * std::pow(u1, 5);
    // phi = t - 2 L(u(t))
    return {
        1.0 - 2.0 * m.dl * u1,
        -2.0 * (m.d2l * u1 * u1 + m.dl * u2),
        -2.0 * (m.d3l * u1 * u1 * u1 + 3.0 * m.d2l * u1 * u2 + m.dl * u3),
    };
}

}  // namespace

BounceChain trace_bounces(double t, const CavityParams& params, const SolverOptions& options)
{
    const double l0 = params.l0;
    if (!(t >= -l0)) {
        throw DomainError("exact solver: t >= -L0 required");
    }
    BounceChain chain;
    const auto cap = static_cast<std::size_t>((t + l0) / (2.0 * l0 * (1.0 - params.epsilon))) + 4;
    chain.feet.reserve(cap);
    double s = t;
    while (s > l0) {
        if (chain.feet.size() >= cap) {
            throw ConvergenceFailure("exact solver: bounce count exceeded its bound");
        }
        const double u = solve_foot(s, params, options);
        chain.feet.push_back(u);
        s = u - mirror_position(u, params);
    }
    chain.base = s;
    return chain;
}

double exact_R(double t, const CavityParams& params, const SolverOptions& options)
{
    const BounceChain chain = trace_bounces(t, params, options);
    return chain.base / params.l0 + 2.0 * static_cast<double>(chain.bounces());
}

double exact_dR(double t, const CavityParams& params, const SolverOptions& options)
{
    if (near_singular_ray(t, params, 1e-6)) {
        throw SingularPoint("exact_dR: t lies on a discontinuity ray of R'", t);
    }
    const BounceChain chain = trace_bounces(t, params, options);
    double dr = 1.0 / params.l0;
    for (double u : chain.feet) {
        const double dl = mirror_jet(u, params).dl;
        dr *= (1.0 - dl) / (1.0 + dl);
    }
    return dr;
}

PhaseSample exact_sample(double t, const CavityParams& params, const SolverOptions& options)
{
    const BounceChain chain = trace_bounces(t, params, options);
    PhaseSample out;
    out.t = t;
    out.method = SolutionMethod::Exact;
    out.r = chain.base / params.l0 + 2.0 * static_cast<double>(chain.bounces());

    if (near_singular_ray(t, params, options.exclusion_delta)) {
        out.near_ray = true;
        out.dr = out.d2r = out.d3r = std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    // Innermost bounce first: R(s_k) = R(phi(s_k)) + 2.
    double r1 = 1.0 / params.l0;
    double r2 = 0.0;
    double r3 = 0.0;
    for (auto it = chain.feet.rbegin(); it != chain.feet.rend(); ++it) {
        const BounceJet p = bounce_jet(*it, params);
        const double n3 = r3 * p.d1 * p.d1 * p.d1 + 3.0 * r2 * p.d1 * p.d2 + r1 * p.d3;
        const double n2 = r2 * p.d1 * p.d1 + r1 * p.d2;
        r1 *= p.d1;
        r2 = n2;
        r3 = n3;
    }
    out.dr = r1;
    out.d2r = r2;
    out.d3r = r3;
    return out;
}

}  // namespace moore
