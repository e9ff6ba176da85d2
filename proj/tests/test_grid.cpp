// SPDX-License-Identifier: Apache-2.0
//
// arraycov - array pattern synthesis and spherical coverage evaluation
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "doctest.h"
#include "error.hpp"
#include "grid.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>

using namespace arraycov;
using testsupport::kind_of;

namespace
{
    double unit_dot(const Direction &a, const Direction &b)
    {
        const double ta = a.theta_deg * deg2rad, pa = a.phi_deg * deg2rad;
        const double tb = b.theta_deg * deg2rad, pb = b.phi_deg * deg2rad;
        return std::sin(ta) * std::sin(tb) * std::cos(pa - pb) + std::cos(ta) * std::cos(tb);
    }

    bool closes(const SphericalGrid &g) { return std::abs(g.weight_sum() - four_pi) <= 1e-3 * four_pi; }

}

TEST_CASE("regular 1x10 grid has 6446 directions and closes")
{
    const auto g = SphericalGrid::regular(1, 10);
    CHECK(g.size() == 179u * 36u + 2u);
    CHECK(g.kind() == GridKind::Regular);
    CHECK(closes(g));
    CHECK(g.is_full_sphere());
    CHECK(g.rings().size() == 181u);
}

TEST_CASE("regular 90x90 grid: poles plus equator")
{
    const auto g = SphericalGrid::regular(90, 90);
    REQUIRE(g.size() == 6u);
    CHECK(g.weight_sum() == doctest::Approx(four_pi).epsilon(1e-12));
    const auto w = solid_angle_weights(g);
    CHECK(w.front() == doctest::Approx(w.back()).epsilon(1e-14));
    // cap from 0 to 45 degrees
    CHECK(w.front() == doctest::Approx(2 * pi * (1 - std::cos(pi / 4))).epsilon(1e-14));
}

TEST_CASE("regular grid rejects bad steps")
{
    CHECK(kind_of([] { SphericalGrid::regular(7, 10); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { SphericalGrid::regular(1, 7); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { SphericalGrid::regular(0, 10); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { SphericalGrid::regular(1, -10); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("uniform grid of 301 directions")
{
    const auto g = SphericalGrid::uniform_sphere(301);
    CHECK(g.size() >= 286u);
    CHECK(g.size() <= 316u);
    CHECK(g.kind() == GridKind::UniformSphere);
    CHECK(closes(g));

    auto w = solid_angle_weights(g);
    std::sort(w.begin(), w.end());
    const double median = w[w.size() / 2];
    CHECK(w.back() <= 2 * median);
    CHECK(w.front() >= median / 2);
}

TEST_CASE("uniform grid minimal case")
{
    const auto g = SphericalGrid::uniform_sphere(6);
    CHECK(g.size() == 6u);
    CHECK(g.weight_sum() == doctest::Approx(four_pi).epsilon(1e-12));
    CHECK(kind_of([] { SphericalGrid::uniform_sphere(5); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("uniform grid ring counts shrink away from the equator")
{
    for (int target : {6, 50, 301, 1000, 5000})
    {
        const auto g = SphericalGrid::uniform_sphere(target);
        auto rings = std::vector<Ring>(g.rings().begin(), g.rings().end());
        std::sort(rings.begin(), rings.end(), [](const Ring &a, const Ring &b) {
            return std::abs(a.theta_deg - 90) < std::abs(b.theta_deg - 90);
        });
        for (std::size_t i = 1; i < rings.size(); ++i)
            CHECK(rings[i].count <= rings[i - 1].count);
        CHECK(closes(g));
    }
}

TEST_CASE("uniform 1000: nearest-neighbour spacing varies by less than 35%")
{
    const auto g = SphericalGrid::uniform_sphere(1000);
    const auto dirs = g.directions();
    double lo = 1e9, hi = 0;
    for (std::size_t i = 0; i < dirs.size(); ++i)
    {
        double best = -2;
        for (std::size_t j = 0; j < dirs.size(); ++j)
            if (j != i)
                best = std::max(best, unit_dot(dirs[i], dirs[j]));
        const double nn = std::acos(std::clamp(best, -1.0, 1.0)) / deg2rad;
        lo = std::min(lo, nn);
        hi = std::max(hi, nn);
    }
    MESSAGE("nearest-neighbour spacing " << lo << " .. " << hi << " deg");
    CHECK((hi - lo) / hi < 0.35);
}

TEST_CASE("grids are deterministic and weights idempotent")
{
    const auto a = SphericalGrid::uniform_sphere(301), b = SphericalGrid::uniform_sphere(301);
    REQUIRE(a.size() == b.size());
    CHECK(a.same_directions(b));
    CHECK(std::equal(a.weights().begin(), a.weights().end(), b.weights().begin()));
    const auto w1 = solid_angle_weights(a), w2 = solid_angle_weights(a);
    CHECK(w1 == w2);
}

TEST_CASE("angular distance and pole handling")
{
    CHECK(angular_distance_deg({90, 0}, {90, 90}) == doctest::Approx(90));
    CHECK(angular_distance_deg({0, 0}, {0, 123}) == doctest::Approx(0));
    CHECK(angular_distance_deg({10, 350}, {10, 10}) == doctest::Approx(std::acos(unit_dot({10, 350}, {10, 10})) / deg2rad));
    const auto g = SphericalGrid::regular(10, 10);
    CHECK(g.find({0, 250}).value() == 0u);
    CHECK(g.find({180, 0}).value() == g.size() - 1);
    CHECK(g.find({90, 360}).has_value());
    CHECK_FALSE(g.find({95, 0}).has_value());
}

TEST_CASE("grid CSV round trip")
{
    const auto dir = testsupport::scratch("grid_csv");
    for (const auto &g : {SphericalGrid::regular(5, 10), SphericalGrid::uniform_sphere(301)})
    {
        save_grid_csv(g, dir / "g.csv");
        const auto h = load_grid_csv(dir / "g.csv");
        CHECK(h.kind() == g.kind());
        CHECK(h.same_directions(g));
        for (std::size_t i = 0; i < g.size(); ++i)
            CHECK(h.weights()[i] == doctest::Approx(g.weights()[i]).epsilon(1e-12));
    }
    testsupport::spit(dir / "bad.csv", "theta_deg,weight_sr\n0,1\n");
    CHECK(kind_of([&] { load_grid_csv(dir / "bad.csv"); }) == ErrorKind::Parse);
}

TEST_CASE("rings with unequal counts classify as uniform sphere")
{
    const auto g = SphericalGrid::from_rings({{0, {0}}, {60, {0, 90, 180, 270}}, {120, {0, 120, 240}}, {180, {0}}});
    CHECK(g.kind() == GridKind::UniformSphere);
    CHECK(g.weight_sum() == doctest::Approx(four_pi));
    const auto partial = SphericalGrid::from_rings({{0, {0}}, {45, {0, 180}}});
    CHECK_FALSE(partial.is_full_sphere());
}
