// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>

#include "moore/cavity.hpp"
#include "moore/errors.hpp"
#include "moore/motion.hpp"
#include "oracles.hpp"

using namespace moore;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("cavity parameters are validated", "[params]")
{
    CHECK_NOTHROW(CavityParams::make(1.0, 0.01, 4));
    CHECK_NOTHROW(CavityParams::make(2.0, 0.0, 1));
    CHECK_THROWS_AS(CavityParams::make(0.0, 0.01, 4), InvalidParams);
    CHECK_THROWS_AS(CavityParams::make(1.0, -0.1, 4), InvalidParams);
    CHECK_THROWS_AS(CavityParams::make(1.0, 0.01, 0), InvalidParams);
    CHECK_THROWS_WITH(CavityParams::make(1.0, 0.1, 4), Catch::Matchers::ContainsSubstring("pi < 1"));
    CHECK_THROWS_AS(CavityParams::make(std::nan(""), 0.01, 1), InvalidParams);
}

TEST_CASE("method names round trip", "[params]")
{
    for (auto m : {SolutionMethod::Exact, SolutionMethod::Perturbative, SolutionMethod::RGImproved}) {
        CHECK(parse_method(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_method("fast"), DomainError);
}

TEST_CASE("mirror is at rest before t = 0", "[motion]")
{
    const auto p = CavityParams::make(1.5, 0.02, 3);
    CHECK(mirror_position(-0.3, p) == 1.5);
    const MirrorJet j = mirror_jet(-0.3, p);
    CHECK(j.dl == 0.0);
    CHECK(j.d2l == 0.0);
    CHECK(j.d3l == 0.0);
    CHECK_THAT(mirror_position(0.25, p), WithinAbs(1.5 * (1 + 0.02 * std::sin(3 * pi * 0.25 / 1.5)), 1e-15));
}

TEST_CASE("mirror jet matches its own differences", "[motion]")
{
    const auto p = CavityParams::make(1.0, 0.01, 4);
    const double h = 1e-3;
    auto l = [&](double t) { return mirror_position(t, p); };
    auto dl = [&](double t) { return mirror_jet(t, p).dl; };
    for (double t : {0.3, 2.7, 11.1}) {
        const MirrorJet j = mirror_jet(t, p);
        CHECK_THAT(j.dl, WithinAbs(oracle::d1(l, t, h), 1e-10));
        CHECK_THAT(j.d2l, WithinAbs(oracle::d1(dl, t, h), 1e-8));
        CHECK_THAT(j.d3l, WithinAbs(oracle::d2(dl, t, h), 1e-6));
    }
}

TEST_CASE("fold_time splits into periods", "[motion]")
{
    CHECK(fold_time(0.0, 1.0).p == 0);
    CHECK(fold_time(0.5, 1.0).z == 0.5);
    FoldedTime f = fold_time(1.5, 1.0);
    CHECK(f.p == 1);
    CHECK_THAT(f.z, WithinAbs(-0.5, 1e-15));
    f = fold_time(20.4, 1.0);
    CHECK(f.p == 10);
    CHECK_THAT(f.z, WithinAbs(0.4, 1e-12));
    f = fold_time(-0.7, 1.0);
    CHECK(f.p == 0);
    CHECK(f.z == -0.7);
    CHECK_THROWS_AS(fold_time(-1.5, 1.0), DomainError);
}

TEST_CASE("odd multiples of L0 stay in the lower period", "[motion]")
{
    for (int k : {1, 3, 7, 41}) {
        const FoldedTime f = fold_time(static_cast<double>(k), 1.0);
        CHECK(f.p == (k - 1) / 2);
        CHECK_THAT(f.z, WithinAbs(1.0, 1e-12));
    }
    const FoldedTime g = fold_time(2.5 * 3.0, 2.5);
    CHECK(g.p == 1);
    CHECK_THAT(g.z, WithinRel(2.5, 1e-12));
}

TEST_CASE("folding reconstructs t", "[motion]")
{
    for (double t = -0.99; t < 60.0; t += 0.137) {
        const FoldedTime f = fold_time(t, 1.3);
        CHECK(f.z >= -1.3 - 1e-12);
        CHECK(f.z <= 1.3 + 1e-12);
        CHECK_THAT(2.0 * f.p * 1.3 + f.z, WithinAbs(t, 1e-12));
    }
}

TEST_CASE("singular rays sit on odd multiples of L0", "[motion]")
{
    CHECK(distance_to_ray(3.0, 1.0) == 0.0);
    CHECK_THAT(distance_to_ray(4.2, 1.0), WithinAbs(0.8, 1e-14));
    CHECK_THAT(distance_to_ray(0.2, 1.0), WithinAbs(0.8, 1e-14));
    const auto p = CavityParams::make(1.0, 0.01, 4);
    CHECK(near_singular_ray(3.0005, p, 1e-3));
    CHECK_FALSE(near_singular_ray(3.002, p, 1e-3));
    CHECK_FALSE(near_singular_ray(3.0, CavityParams::make(1.0, 0.0, 4), 1e-3));
}
