// SPDX-License-Identifier: Apache-2.0
#include "moore/cavity.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "moore/errors.hpp"

namespace moore {

CavityParams CavityParams::make(double l0, double epsilon, int q)
{
    CavityParams params{l0, epsilon, q};
    params.validate();
    return params;
}

void CavityParams::validate() const
{
    auto fail = [](const std::string& msg) { throw InvalidParams(msg); };
    if (!(std::isfinite(l0) && l0 > 0.0)) {
        fail("invalid cavity: L0 > 0 violated (L0 = " + std::to_string(l0) + ")");
    }
    if (q < 1) {
        fail("invalid cavity: q >= 1 violated (q = " + std::to_string(q) + ")");
    }
    if (!(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon < 1.0)) {
        fail("invalid cavity: 0 <= epsilon < 1 violated (epsilon = " + std::to_string(epsilon) + ")");
    }
    if (!(epsilon * q * pi < 1.0)) {
        std::ostringstream os;
        os << "invalid cavity: epsilon*q*pi < 1 violated (mirror speed " << epsilon * q * pi
           << " reaches the speed of light)";
        fail(os.str());
    }
}

std::string_view to_string(SolutionMethod method) noexcept
{
    switch (method) {
    case SolutionMethod::Exact:
        return "exact";
    case SolutionMethod::Perturbative:
        return "pert";
    case SolutionMethod::RGImproved:
        return "rg";
    }
    return "unknown";
}

SolutionMethod parse_method(std::string_view name)
{
    if (name == "exact") {
        return SolutionMethod::Exact;
    }
    if (name == "pert" || name == "perturbative") {
        return SolutionMethod::Perturbative;
    }
    if (name == "rg") {
        return SolutionMethod::RGImproved;
    }
    throw DomainError("unknown method '" + std::string(name) + "' (expected exact, pert or rg)");
}

}  // namespace moore
