// SPDX-License-Identifier: Apache-2.0
#include "moore/analytic.hpp"

#include <cmath>
#include <limits>

#include "moore/errors.hpp"
#include "moore/motion.hpp"

namespace moore {

namespace {

// xi-dependent factors are written in terms of n = min(xi, 1/xi) and
// s = +1 (xi <= 1) or -1 (xi > 1). Dividing through by the right power of xi
// turns every xi expression into the same expression in n, with (1 - xi^2)
// picking up the sign s. Nothing overflows for odd q at long times.
struct XiForm {
    double n;
    double s;
};

XiForm xi_form(double t, const CavityParams& params) noexcept
{
    const double lx = log_xi(t, params);
    return {std::exp(-std::abs(lx)), lx <= 0.0 ? 1.0 : -1.0};
}

// -(2/(pi q)) arg[(1+n) + s(1-n) e^{i theta}]
double secular_correction(double theta, XiForm f, int q) noexcept
{
    const double b = f.s * (1.0 - f.n);
    return -2.0 / (pi * q) * std::atan2(b * std::sin(theta), (1.0 + f.n) + b * std::cos(theta));
}

double log_cosh(double x) noexcept
{
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

double perturbative_R(double t, const CavityParams& params)
{
    const FoldedTime f = fold_time(t, params.l0);
    // (t/L0) sin(q pi t/L0) - (z/L0) sin(q pi z/L0) = 2p sin(q pi z/L0)
    return t / params.l0 +
           params.epsilon * params.parity_sign() * 2.0 * static_cast<double>(f.p) *
               std::sin(params.omega() * f.z);
}

PhaseSample perturbative_sample(double t, const CavityParams& params, const SolverOptions& options)
{
    const FoldedTime f = fold_time(t, params.l0);
    const double w = params.omega();
    const double amp = params.epsilon * params.parity_sign() * 2.0 * static_cast<double>(f.p);
    const double s = std::sin(w * f.z);
    const double c = std::cos(w * f.z);

    PhaseSample out;
    out.t = t;
    out.method = SolutionMethod::Perturbative;
    out.r = t / params.l0 + amp * s;
    out.in_validity = params.epsilon * t / params.l0 < 1.0;
    if (near_singular_ray(t, params, options.exclusion_delta)) {
        out.near_ray = true;
        out.dr = out.d2r = out.d3r = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    out.dr = 1.0 / params.l0 + amp * w * c;
    out.d2r = -amp * w * w * s;
    out.d3r = -amp * w * w * w * c;
    return out;
}

double log_xi(double t, const CavityParams& params) noexcept
{
    return params.parity_sign() * pi * params.q * params.epsilon * t / params.l0;
}

double xi(double t, const CavityParams& params) noexcept
{
    return std::exp(log_xi(t, params));
}

double rg_R_s(double t, const CavityParams& params)
{
    const FoldedTime f = fold_time(t, params.l0);
    if (t <= params.l0) {
        return t / params.l0;
    }
    return t / params.l0 +
           secular_correction(params.omega() * f.z, xi_form(t, params), params.q);
}

double rg_R_np(double t, const CavityParams& params)
{
    const FoldedTime f = fold_time(t, params.l0);
    if (t <= params.l0) {
        return 0.0;
    }
    const XiForm x = xi_form(t, params);
    const double theta = params.omega() * f.z;
    const double n2 = x.n * x.n;
    const double bracket = 2.0 * x.n / ((1.0 + n2) + x.s * (1.0 - n2) * std::cos(theta));
    return -params.parity_sign() * params.epsilon * (f.z / params.l0) * std::sin(theta) * bracket;
}

double rg_R(double t, const CavityParams& params)
{
    return rg_R_s(t, params) + rg_R_np(t, params);
}

RgDerivatives rg_derivatives(double t, const CavityParams& params)
{
    const FoldedTime f = fold_time(t, params.l0);
    const double l0 = params.l0;
    if (t <= l0) {
        return {1.0 / l0, 0.0, 0.0};
    }
    const XiForm x = xi_form(t, params);
    const double theta = params.omega() * f.z;
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double n2 = x.n * x.n;
    const double m = x.s * (1.0 - n2);  // (1 - xi^2) in normalised form
    const double d = (1.0 + n2) + m * c;
    const double pq = pi * params.q;

    RgDerivatives out;
    out.dr = 2.0 * x.n / (l0 * d);
    out.d2r = 2.0 * x.n * m * pq * s / (l0 * l0 * d * d);
    out.d3r = 2.0 * x.n * m * pq * pq * ((1.0 + n2) * c + m * (1.0 + s * s)) / (l0 * l0 * l0 * d * d * d);
    return out;
}

PhaseSample rg_sample(double t, const CavityParams& params, const SolverOptions& options)
{
    PhaseSample out;
    out.t = t;
    out.method = SolutionMethod::RGImproved;
    out.r = rg_R(t, params);
    out.in_validity = params.epsilon * params.epsilon * t / params.l0 < 1.0;
    if (near_singular_ray(t, params, options.exclusion_delta)) {
        out.near_ray = true;
        out.dr = out.d2r = out.d3r = std::numeric_limits<double>::quiet_NaN();
        return out;
    }
    const RgDerivatives d = rg_derivatives(t, params);
    out.dr = d.dr;
    out.d2r = d.d2r;
    out.d3r = d.d3r;
    return out;
}

RGCoefficients rg_coefficients(double t, const CavityParams& params, int jmax)
{
    if (jmax < 1) {
        throw DomainError("rg_coefficients: jmax >= 1 required");
    }
    const int q = params.q;
    RGCoefficients out;
    out.tau_star = t * params.epsilon * pi * params.parity_sign() / (2.0 * params.l0);
    out.log_xi = log_xi(t, params);
    out.xi = std::exp(out.log_xi);
    out.a0 = -2.0 / (pi * q) * log_cosh(q * out.tau_star);

    const double th = std::tanh(q * out.tau_star);
    double power = 1.0;
    out.a_qj.reserve(static_cast<std::size_t>(jmax));
    for (int j = 1; j <= jmax; ++j) {
        power *= th;
        if (std::abs(power) < 1e-16) {
            break;
        }
        out.a_qj.push_back(2.0 / (pi * q * j) * power);
    }
    return out;
}

double rg_series_partial_sum(const RGCoefficients& coeffs, double t, const CavityParams& params)
{
    const double theta = params.omega() * fold_time(t, params.l0).z;
    double sum = 0.0;
    for (std::size_t i = 0; i < coeffs.a_qj.size(); ++i) {
        sum += coeffs.a_qj[i] * std::sin(static_cast<double>(i + 1) * theta);
    }
    return sum;
}

double rg_series_closed_form(double t, const CavityParams& params)
{
    const double theta = params.omega() * fold_time(t, params.l0).z;
    return secular_correction(theta, xi_form(t, params), params.q);
}

double rg_series_tail_bound(const RGCoefficients& coeffs, const CavityParams& params)
{
    const double th = std::abs(std::tanh(params.q * coeffs.tau_star));
    if (th >= 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    const auto next = static_cast<double>(coeffs.a_qj.size() + 1);
    return 2.0 / (pi * params.q * next) * std::pow(th, next) / (1.0 - th);
}

}  // namespace moore
