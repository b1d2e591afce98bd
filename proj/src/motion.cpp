// SPDX-License-Identifier: Apache-2.0
#include "moore/motion.hpp"

#include <algorithm>
#include <cmath>

#include "moore/errors.hpp"

namespace moore {

double mirror_position(double t, const CavityParams& params) noexcept
{
    if (t < 0.0) {
        return params.l0;
    }
    return params.l0 * (1.0 + params.epsilon * std::sin(params.omega() * t));
}

MirrorJet mirror_jet(double t, const CavityParams& params) noexcept
{
    if (t < 0.0) {
        return {params.l0, 0.0, 0.0, 0.0};
    }
    const double w = params.omega();
    const double amp = params.l0 * params.epsilon;
    const double s = std::sin(w * t);
    const double c = std::cos(w * t);
    return {params.l0 + amp * s, amp * w * c, -amp * w * w * s, -amp * w * w * w * c};
}

FoldedTime fold_time(double t, double l0)
{
    if (!(t >= -l0)) {
        throw DomainError("fold_time: t >= -L0 required");
    }
    const double r = t / l0;
    long k = static_cast<long>(std::trunc(r));
    const double nearest = std::nearbyint(r);
    const long n = static_cast<long>(nearest);
    // Odd multiples of L0 belong to the lower period (z = +L0).
    if (n > 0 && n % 2 == 1 && std::abs(r - nearest) <= 1e-12 * std::max(1.0, std::abs(r))) {
        k = n - 1;
    }
    const long p = (k % 2 == 0) ? k / 2 : (k + 1) / 2;
    return {p, t - 2.0 * static_cast<double>(p) * l0};
}

double distance_to_ray(double u, double l0) noexcept
{
    const double v = u / l0;
    // Nearest odd integer m >= 1.
    double m = 2.0 * std::floor(v / 2.0) + 1.0;
    double best = std::abs(v - m);
    if (m + 2.0 >= 1.0) {
        best = std::min(best, std::abs(v - (m + 2.0)));
    }
    if (m - 2.0 >= 1.0) {
        best = std::min(best, std::abs(v - (m - 2.0)));
    }
    if (m < 1.0) {
        best = std::abs(v - 1.0);
    }
    return best * l0;
}

bool near_singular_ray(double u, const CavityParams& params, double delta) noexcept
{
    return params.epsilon > 0.0 && distance_to_ray(u, params.l0) < delta * params.l0;
}

}  // namespace moore
