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
#include "pattern.hpp"
#include "support.hpp"

#include <cmath>
#include <limits>

using namespace arraycov;
using testsupport::scratch;
using testsupport::spit;

namespace
{
    const char *header = "feed,theta_deg,phi_deg,re_gtheta,im_gtheta,re_gphi,im_gphi\n";

    // Builds a pattern CSV on the regular 90x90 grid for one feed.
    std::string small_csv(const std::string &bad_row = {}, int bad_at = -1)
    {
        std::string s = header;
        const double dirs[6][2] = {{0, 0}, {90, 0}, {90, 90}, {90, 180}, {90, 270}, {180, 0}};
        for (int i = 0; i < 6; ++i)
        {
            if (i == bad_at)
                s += bad_row + "\n";
            else
                s += "1V," + std::to_string(dirs[i][0]) + "," + std::to_string(dirs[i][1]) + ",1,0,0,0\n";
        }
        return s;
    }

    std::string error_text(const std::filesystem::path &p)
    {
        try
        {
            load_pattern_csv(p);
        }
        catch (const Error &e)
        {
            return std::string(error_kind_name(e.kind())) + ": " + e.what();
        }
        return "no error";
    }
}

TEST_CASE("power gain in dB")
{
    const auto grid = SphericalGrid::regular(90, 90);
    std::vector<PolarimetricSample> s(6, {1.0, 0.0});
    s[1] = {1.0, 1.0};
    s[2] = {0.0, 0.0};
    const ElementPatternSet set(grid, {"1V"}, s);
    CHECK(power_gain_db(set, "1V", {0, 0}) == doctest::Approx(0.0));
    CHECK(power_gain_db(set, "1V", {90, 0}) == doctest::Approx(10 * std::log10(2.0)));
    CHECK(power_gain_db(set, "1V", {90, 90}) == -std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(power_gain_db(set, "9H", {0, 0}), Error);
    try
    {
        power_gain_db(set, "1V", {45, 0});
        FAIL("off-grid direction accepted");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::Lookup);
    }
}

TEST_CASE("power is invariant under a global phase rotation")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i)
    {
        PolarimetricSample s{testsupport::random_cplx(rng), testsupport::random_cplx(rng)};
        const cplx rot = std::polar(1.0, std::uniform_real_distribution<double>(0, 6.3)(rng));
        const PolarimetricSample r{s.g_theta * rot, s.g_phi * rot};
        CHECK(r.power() == doctest::Approx(s.power()).epsilon(1e-14));
    }
}

TEST_CASE("pattern set validation")
{
    const auto grid = SphericalGrid::regular(90, 90);
    std::vector<PolarimetricSample> s(12, {1.0, 0.0});
    CHECK_THROWS_AS(ElementPatternSet(grid, {"1V", "1V"}, s), Error);
    CHECK_THROWS_AS(ElementPatternSet(grid, {"1V"}, s), Error);
    s[3].g_phi = {std::nan(""), 0.0};
    CHECK_THROWS_AS(ElementPatternSet(grid, {"1V", "2H"}, s), Error);
}

TEST_CASE("save and load round trip, 8 feeds at 1x10 degrees")
{
    const auto dir = scratch("pattern_roundtrip");
    const auto set = testsupport::random_set(SphericalGrid::regular(1, 10), testsupport::eight_feeds(), 3);
    save_pattern_csv(set, dir / "p.csv");
    CHECK(std::filesystem::exists(dir / "p.json"));
    const auto back = load_pattern_csv(dir / "p.csv");
    REQUIRE(back.feeds() == set.feeds());
    CHECK(back.grid().kind() == GridKind::Regular);
    CHECK(back.grid().size() == 6446u);
    CHECK(back.metadata().frequency_ghz == 28.0);
    CHECK(back.metadata().convention == "realized-gain-embedded");
    double worst = 0;
    for (std::size_t i = 0; i < set.samples().size(); ++i)
    {
        const auto &a = set.samples()[i], &b = back.samples()[i];
        worst = std::max({worst, std::abs(a.g_theta - b.g_theta), std::abs(a.g_phi - b.g_phi)});
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("sidecar metadata is read when present")
{
    const auto dir = scratch("pattern_sidecar");
    spit(dir / "p.csv", small_csv());
    spit(dir / "p.json", R"({"frequency_ghz": 26.5, "convention": "realized-gain-embedded"})");
    CHECK(load_pattern_csv(dir / "p.csv").metadata().frequency_ghz == 26.5);
    std::filesystem::remove(dir / "p.json");
    CHECK(load_pattern_csv(dir / "p.csv").metadata().frequency_ghz == 28.0);
}

TEST_CASE("parse errors name the offending row")
{
    const auto dir = scratch("pattern_errors");
    {
        std::string s = small_csv();
        s += "2H,0,0,1,0,0,0\n2H,90,0,1,0,0,0\n2H,90,90,1,0,0,0\n2H,90,180,nan,0,0,0\n";
        spit(dir / "nan.csv", s);
        const auto msg = error_text(dir / "nan.csv");
        CHECK(msg.find("parse") == 0);
        CHECK(msg.find("row 10") != std::string::npos);
    }
    {
        spit(dir / "nan7.csv", small_csv() + "2H,0,0,NaN,0,0,0\n");
        const auto msg = error_text(dir / "nan7.csv");
        MESSAGE(msg);
        CHECK(msg.find("row 7") != std::string::npos);
        CHECK(msg.find("non-finite") != std::string::npos);
    }
    spit(dir / "empty.csv", "");
    CHECK(error_text(dir / "empty.csv").find("no samples") != std::string::npos);
    spit(dir / "header_only.csv", header);
    CHECK(error_text(dir / "header_only.csv").find("no samples") != std::string::npos);

    spit(dir / "cols.csv", "feed,theta_deg,phi_deg,re_gtheta\n1V,0,0,1\n");
    CHECK(error_text(dir / "cols.csv").find("missing column") != std::string::npos);

    // the 90-degree ring is missing phi = 180
    spit(dir / "ragged.csv", small_csv("1V,90,200,1,0,0,0", 3));
    const auto ragged = error_text(dir / "ragged.csv");
    CHECK(ragged.find("parse") == 0);
    CHECK(ragged.find("row") != std::string::npos);

    spit(dir / "dup.csv", small_csv("1V,90,0,1,0,0,0", 2));
    CHECK(error_text(dir / "dup.csv").find("parse") == 0);
}

TEST_CASE("pole rows are collapsed")
{
    const auto dir = scratch("pattern_poles");
    std::string s = small_csv();
    s += "1V,0,90,1,0,0,0\n1V,180,270,1,0,0,0\n";
    spit(dir / "p.csv", s);
    const auto set = load_pattern_csv(dir / "p.csv");
    CHECK(set.grid().size() == 6u);
    CHECK(set.grid().kind() == GridKind::Regular);
}

TEST_CASE("resample onto the identical grid is exact")
{
    const auto set = testsupport::random_set(SphericalGrid::regular(5, 10), {"1V", "2H"}, 5);
    const auto out = resample(set, set.grid());
    for (std::size_t i = 0; i < set.samples().size(); ++i)
    {
        CHECK(out.samples()[i].g_theta == set.samples()[i].g_theta);
        CHECK(out.samples()[i].g_phi == set.samples()[i].g_phi);
    }
}

TEST_CASE("resample of a constant pattern is constant")
{
    const auto set = testsupport::constant_set(SphericalGrid::regular(1, 10), {"1V"}, {2.0, 0.0}, {0.0, 0.0});
    for (const auto &target : {SphericalGrid::uniform_sphere(301), SphericalGrid::regular(3, 5)})
    {
        const auto out = resample(set, target);
        for (const auto &s : out.samples())
        {
            CHECK(std::abs(s.g_theta - cplx(2.0, 0.0)) < 1e-12);
            CHECK(std::abs(s.g_phi) < 1e-12);
        }
    }
}

TEST_CASE("resample interpolates linearly in phi on the equator")
{
    const auto src = SphericalGrid::regular(10, 10);
    std::vector<PolarimetricSample> s(src.size());
    for (std::size_t i = 0; i < src.size(); ++i)
        s[i] = {std::polar(1.0, pi * src.direction(i).phi_deg / 180.0), 0.0};
    const ElementPatternSet set(src, {"1V"}, s);
    auto direct = [](double lo, double hi) {
        return 0.5 * (std::polar(1.0, pi * lo / 180.0) + std::polar(1.0, pi * hi / 180.0));
    };
    const auto a = resample(set, SphericalGrid::from_rings({{0, {0}}, {90, {5, 185}}, {180, {0}}}));
    CHECK(std::abs(a.sample(0, 1).g_theta - direct(0, 10)) < 1e-12);
    CHECK(std::abs(a.sample(0, 2).g_theta - direct(180, 190)) < 1e-12);
    const auto b = resample(set, SphericalGrid::from_rings({{0, {0}}, {90, {175, 355}}, {180, {0}}}));
    CHECK(std::abs(b.sample(0, 2).g_theta - direct(350, 360)) < 1e-12);
}

TEST_CASE("resample matches an independent bilinear evaluation")
{
    // field defined analytically; the source stores it at the nodes
    auto f = [](double t, double p) {
        const double tr = t * deg2rad, pr = p * deg2rad;
        return cplx(std::cos(tr) + std::sin(tr) * std::cos(pr), std::sin(tr) * std::sin(2 * pr));
    };
    const double dt = 5, dp = 10;
    const auto src = SphericalGrid::regular(dt, dp);
    std::vector<PolarimetricSample> s(src.size());
    for (std::size_t i = 0; i < src.size(); ++i)
    {
        const auto d = src.direction(i);
        s[i] = {f(d.theta_deg, d.phi_deg), 2.0 * f(d.theta_deg, d.phi_deg)};
    }
    const ElementPatternSet set(src, {"1V"}, s);
    const auto target = SphericalGrid::uniform_sphere(500);
    const auto out = resample(set, target);
    double worst = 0;
    for (std::size_t i = 0; i < target.size(); ++i)
    {
        const auto d = target.direction(i);
        const double ti = std::floor(d.theta_deg / dt), pj = std::floor(d.phi_deg / dp);
        const double t = d.theta_deg / dt - ti, u = d.phi_deg / dp - pj;
        const double t0 = ti * dt, t1 = std::min(180.0, t0 + dt), p0 = pj * dp, p1 = p0 + dp;
        const cplx expect = (1 - t) * ((1 - u) * f(t0, p0) + u * f(t0, p1)) + t * ((1 - u) * f(t1, p0) + u * f(t1, p1));
        worst = std::max(worst, std::abs(out.sample(0, i).g_theta - expect));
        worst = std::max(worst, std::abs(out.sample(0, i).g_phi - 2.0 * expect));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("resample needs a regular source")
{
    const auto set = testsupport::random_set(SphericalGrid::uniform_sphere(301), {"1V"}, 1);
    try
    {
        resample(set, SphericalGrid::regular(10, 10));
        FAIL("expected an error");
    }
    catch (const Error &e)
    {
        CHECK(e.kind() == ErrorKind::Unsupported);
    }
}
