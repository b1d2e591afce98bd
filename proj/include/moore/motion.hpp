// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "moore/cavity.hpp"

namespace moore {

/// L(t); the mirror is at rest (L = L0) for t < 0.
double mirror_position(double t, const CavityParams& params) noexcept;

/// L and its first three time derivatives. All derivatives vanish for t < 0.
struct MirrorJet {
    double l = 0.0;
    double dl = 0.0;
    double d2l = 0.0;
    double d3l = 0.0;
};

MirrorJet mirror_jet(double t, const CavityParams& params) noexcept;

/// Splits t into period index and offset, t = 2 p L0 + z.
///
/// p = int(t/L0)/2 when int(t/L0) is even and (int(t/L0)+1)/2 when odd, with
/// int truncating toward zero. A time within 1e-12 (relative) of an odd
/// multiple of L0 stays in the lower period, z = +L0.
/// Precondition t >= -L0 (DomainError otherwise).
FoldedTime fold_time(double t, double l0);

/// Distance from u to the nearest singular null ray u = (2p+1) L0, p >= 0.
double distance_to_ray(double u, double l0) noexcept;

/// True when eps > 0 and u lies strictly within `delta` of a singular ray.
bool near_singular_ray(double u, const CavityParams& params, double delta) noexcept;

}  // namespace moore
