// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace moore {

// Every library failure derives from Error so callers can catch the family.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Parameters violate a CavityParams / RayleighParams invariant (CLI exit 2).
class InvalidParams : public Error {
public:
    using Error::Error;
};

// Argument outside the operation's domain (CLI exit 2).
class DomainError : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

// Evaluation requested inside the exclusion window of a singular null ray.
class SingularPoint : public Error {
public:
    SingularPoint(const std::string& what, double u, std::string ray = {})
        : Error(what), u_(u), ray_(std::move(ray)) {}

    double u() const noexcept { return u_; }
    // "t+x" or "t-x" when raised from energy_density, empty otherwise.
    const std::string& ray() const noexcept { return ray_; }

private:
    double u_;
    std::string ray_;
};

class NonpositiveDerivative : public Error {
public:
    using Error::Error;
};

class QuadratureFailure : public Error {
public:
    using Error::Error;
};

class NoPeaks : public Error {
public:
    using Error::Error;
};

class SignMixture : public Error {
public:
    using Error::Error;
};

class StepSizeFailure : public Error {
public:
    using Error::Error;
};

}  // namespace moore
