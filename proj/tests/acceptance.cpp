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

// Acceptance checks. One line per criterion:
//   [PASS|FAIL] <n> <name>: <measured values> (<seconds> s, limit <seconds> s)
// Exit status is nonzero when any criterion fails.

#include "coverage.hpp"
#include "deembed.hpp"
#include "materials.hpp"
#include "support.hpp"
#include "synth.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>

using namespace arraycov;
namespace fs = std::filesystem;

namespace
{
    struct Outcome
    {
        bool pass;
        std::string detail;
    };

    struct Criterion
    {
        int id;
        const char *name;
        double limit_s;
        std::function<Outcome()> run;
    };

    std::string fmt(const char *f, double a, double b = 0, double c = 0)
    {
        char buf[256];
        std::snprintf(buf, sizeof(buf), f, a, b, c);
        return buf;
    }

    const fs::path data_dir = ARRAYCOV_DATA_DIR;

    SynthesisPlan reference_plan()
    {
        return SynthesisPlan({{"front-V", {"1V", "3V", "5V", "7V"}},
                              {"front-H", {"2H", "4H", "6H", "8H"}},
                              {"back-V", {"7V", "5V", "3V", "1V"}},
                              {"back-H", {"8H", "6H", "4H", "2H"}}},
                             3);
    }

    // Eight feeds on four dual-polarized patches along y, half a wavelength
    // apart, with a broad forward lobe.
    ElementPatternSet synthetic_array(const SphericalGrid &grid)
    {
        const auto feeds = testsupport::eight_feeds();
        std::vector<PolarimetricSample> s;
        for (std::size_t f = 0; f < 8; ++f)
        {
            const double y = 0.5 * double(f / 2) - 0.75;
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                const auto d = grid.direction(i);
                const double t = d.theta_deg * deg2rad, p = d.phi_deg * deg2rad;
                const double lobe = 0.6 + 0.4 * std::sin(t) * std::cos(p);
                const cplx geo = std::polar(2.0 * lobe, -2 * pi * y * std::sin(t) * std::sin(p) + 0.3 * double(f));
                s.push_back(f % 2 == 0 ? PolarimetricSample{geo * std::cos(p), -geo * std::cos(t) * std::sin(p)}
                                       : PolarimetricSample{geo * std::cos(t) * std::sin(p), geo * std::cos(p)});
            }
        }
        return {grid, feeds, s};
    }

    Outcome enumeration_counts()
    {
        const auto w = enumerate_weights({"x", {0, 1, 2, 3}}, 3);
        const auto plan = reference_plan();
        const auto set = testsupport::random_set(SphericalGrid::regular(90, 90), testsupport::eight_feeds(), 1);
        std::size_t streamed = 0;
        for_each_realization(set, plan, [&](auto...) { ++streamed; });
        const bool ok = w.size() == 512 && plan.realization_count() == 2048 && streamed == 2048;
        return {ok, "per sub-array " + std::to_string(w.size()) + ", plan " + std::to_string(plan.realization_count()) +
                        ", enumerated " + std::to_string(streamed)};
    }

    Outcome thin_film()
    {
        const auto stack = load_stack_json(data_dir / "stacks/film.json");
        const double db = 20 * std::log10(std::abs(layered_reflection(stack, 28, 0, Polarization::TE)));
        return {std::abs(db + 28.4) <= 0.3, fmt("20log10|G| = %.3f dB (target -28.4 +/- 0.3)", db)};
    }

    Outcome skin_delta()
    {
        const auto skin = load_material_csv(data_dir / "materials/skin_phantom_28ghz.csv");
        const double depth = penetration_depth_mm(skin, 28);
        const double d = skin_thickness_delta(load_stack_json(data_dir / "stacks/skin_5mm.json"),
                                              load_stack_json(data_dir / "stacks/skin_1p5mm.json"), 28);
        const bool ok = depth >= 0.92 && depth <= 0.95 && std::abs(std::abs(d) - 0.14) <= 0.1;
        return {ok, fmt("penetration depth %.4f mm, |delta| = %.4f dB (target 0.14 +/- 0.1)", depth, std::abs(d))};
    }

    Outcome coherent_combining()
    {
        const auto one = testsupport::random_set(SphericalGrid::regular(1, 10), {"e"}, 4);
        std::vector<PolarimetricSample> s;
        for (int k = 0; k < 4; ++k)
            s.insert(s.end(), one.samples().begin(), one.samples().end());
        const ElementPatternSet four(one.grid(), {"a", "b", "c", "d"}, s);
        const auto out = synthesize(four, {"x", {0, 1, 2, 3}}, {{0, 0, 0, 0}, 3});
        const double expect = 10 * std::log10(4.0);
        double worst = 0;
        for (std::size_t i = 0; i < out.size(); ++i)
            worst = std::max(worst, std::abs(to_db(out[i].power()) - to_db(one.sample(0, i).power()) - expect));
        return {worst <= 1e-6, fmt("max |gain - single - 6.0206| = %.2e dB over %.0f directions", worst, double(out.size()))};
    }

    Outcome array_factor()
    {
        const std::vector<double> y = {-0.75, -0.25, 0.25, 0.75};
        const auto grid = SphericalGrid::uniform_sphere(301);
        std::vector<PolarimetricSample> s;
        for (std::size_t e = 0; e < 4; ++e)
            for (std::size_t i = 0; i < grid.size(); ++i)
            {
                const auto d = grid.direction(i);
                const double uy = std::sin(d.theta_deg * deg2rad) * std::sin(d.phi_deg * deg2rad);
                const cplx geo = std::polar(1.0, -2 * pi * y[e] * uy);
                s.push_back({std::sqrt(0.4) * geo, std::sqrt(0.6) * geo});
            }
        const ElementPatternSet set(grid, {"a", "b", "c", "d"}, s);
        const auto weights = enumerate_weights({"x", {0, 1, 2, 3}}, 3);
        std::mt19937_64 rng(2024);
        std::uniform_int_distribution<std::size_t> pick_dir(0, grid.size() - 1), pick_w(0, weights.size() - 1);
        std::vector<std::size_t> dirs(20);
        for (auto &d : dirs)
            d = pick_dir(rng);
        double worst = 0;
        int compared = 0;
        for (int k = 0; k < 50; ++k)
        {
            const auto &w = weights[pick_w(rng)];
            const auto out = synthesize(set, {"x", {0, 1, 2, 3}}, w);
            const auto ph = w.phases_deg();
            for (auto i : dirs)
            {
                const auto d = grid.direction(i);
                const double uy = std::sin(d.theta_deg * deg2rad) * std::sin(d.phi_deg * deg2rad);
                cplx af = 0;
                for (std::size_t e = 0; e < 4; ++e)
                    af += std::polar(1.0, ph[e] * deg2rad - 2 * pi * y[e] * uy);
                if (std::norm(af) < 1e-12)
                    continue; // exact null: both sides are -inf up to rounding
                worst = std::max(worst, std::abs(to_db(out[i].power()) - 10 * std::log10(std::norm(af) / 4)));
                ++compared;
            }
        }
        return {worst < 1e-9 && compared > 900, fmt("max abs error %.2e dB over %.0f points", worst, compared)};
    }

    double continuous_optimum(const std::vector<cplx> &gt, const std::vector<cplx> &gp, std::mt19937_64 &rng)
    {
        std::uniform_real_distribution<double> u(0, 2 * pi);
        double best = 0;
        for (int start = 0; start < 8; ++start)
        {
            std::vector<double> ph(gt.size());
            for (auto &p : ph)
                p = u(rng);
            double power = 0;
            for (int it = 0; it < 500; ++it)
            {
                cplx a = 0, b = 0;
                for (std::size_t i = 0; i < gt.size(); ++i)
                {
                    a += std::polar(1.0, ph[i]) * gt[i];
                    b += std::polar(1.0, ph[i]) * gp[i];
                }
                power = (std::norm(a) + std::norm(b)) / double(gt.size());
                const double n = std::sqrt(std::norm(a) + std::norm(b));
                for (std::size_t i = 0; i < gt.size(); ++i)
                    ph[i] = -std::arg(std::conj(a / n) * gt[i] + std::conj(b / n) * gp[i]);
            }
            best = std::max(best, power);
        }
        return best;
    }

    Outcome quantization_bound()
    {
        const auto grid = SphericalGrid::regular(5, 10);
        const auto set = testsupport::random_set(grid, {"a", "b", "c", "d"}, 777);
        const auto best = max_realized_gain(set, SynthesisPlan({{"x", {"a", "b", "c", "d"}}}, 3));
        std::mt19937_64 rng(3);
        int violations = 0;
        double worst = 0;
        for (std::size_t i = 0; i < 1000; ++i)
        {
            std::vector<cplx> gt(4), gp(4);
            for (std::size_t e = 0; e < 4; ++e)
            {
                gt[e] = set.sample(e, i).g_theta;
                gp[e] = set.sample(e, i).g_phi;
            }
            const double gap = 10 * std::log10(continuous_optimum(gt, gp, rng) / best.gain()[i]);
            worst = std::max(worst, gap);
            violations += gap > 0.687;
        }
        return {violations == 0, fmt("1000 cases, worst loss %.4f dB, %.0f violations of 0.687 dB", worst, violations)};
    }

    Outcome deembed_round_trip()
    {
        const std::vector<double> table = {10.7, 10.4, 10.3, 11.0, 12.4, 12.1, 13.1, 14.4};
        const auto sim = synthetic_array(SphericalGrid::regular(1, 10));
        std::vector<PolarimetricSample> s(sim.samples().begin(), sim.samples().end());
        const std::size_t n = sim.grid().size();
        for (std::size_t f = 0; f < 8; ++f)
            for (std::size_t i = 0; i < n; ++i)
            {
                s[f * n + i].g_theta *= std::pow(10.0, -table[f] / 20);
                s[f * n + i].g_phi *= std::pow(10.0, -table[f] / 20);
            }
        const ElementPatternSet meas(sim.grid(), sim.feeds(), s);
        std::map<std::string, BeamWindow> windows;
        for (const auto &f : sim.feeds())
            windows[f] = {{90, 0}, 60};
        const auto est = estimate_losses(sim, meas, windows);
        double worst_loss = 0;
        for (std::size_t f = 0; f < 8; ++f)
            worst_loss = std::max(worst_loss, std::abs(est.loss_db(sim.feeds()[f]) - table[f]));
        const auto fixed = apply_losses(meas, est);
        double worst_gain = 0;
        for (std::size_t f = 0; f < 8; ++f)
            for (std::size_t i = 0; i < n; ++i)
                if (windows.at(sim.feeds()[f]).contains(sim.grid().direction(i)))
                    worst_gain = std::max(worst_gain, std::abs(to_db(fixed.sample(f, i).power()) - to_db(sim.sample(f, i).power())));
        return {worst_loss < 1e-9 && worst_gain < 1e-9,
                fmt("max loss error %.2e dB, max restored-gain error %.2e dB", worst_loss, worst_gain)};
    }

    Outcome cdf_correctness()
    {
        double worst_p = 0, worst_c = 0;
        bool monotone = true;
        std::uint64_t seed = 500;
        for (const auto &grid : {SphericalGrid::uniform_sphere(301), SphericalGrid::regular(1, 10)})
            for (int k = 0; k < 5; ++k)
            {
                std::mt19937_64 rng(seed++);
                std::uniform_real_distribution<double> u(-40, 10);
                std::vector<double> g(grid.size());
                for (auto &x : g)
                    x = std::pow(10.0, std::round(u(rng) * 4) / 40); // 0.1 dB steps force ties
                const GainMap map(grid, g);
                const auto r = coverage_cdf(map);

                std::vector<std::size_t> order(g.size());
                std::iota(order.begin(), order.end(), 0);
                std::sort(order.begin(), order.end(), [&](auto a, auto b) { return g[a] < g[b]; });
                const double total = std::accumulate(grid.weights().begin(), grid.weights().end(), 0.0);
                std::vector<double> xs, cs;
                double run = 0;
                for (std::size_t j = 0; j < order.size(); ++j)
                {
                    run += grid.weights()[order[j]];
                    if (j + 1 < order.size() && g[order[j + 1]] == g[order[j]])
                        continue;
                    xs.push_back(map.gain_db(order[j]));
                    cs.push_back(run / total);
                }
                double prev = 0;
                for (std::size_t j = 0; j < xs.size(); ++j)
                {
                    // strictly below xs[j] is the previous cumulative value
                    const double below = j ? cs[j - 1] : 0.0;
                    worst_c = std::max(worst_c, std::abs(r.cdf(xs[j]) - below));
                    monotone = monotone && r.cdf(xs[j]) >= prev;
                    prev = r.cdf(xs[j]);
                }
                for (double p : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95})
                {
                    const std::size_t j = std::size_t(std::lower_bound(cs.begin(), cs.end(), p) - cs.begin());
                    const double oracle = j == 0 ? xs[0] : xs[j - 1] + (p - cs[j - 1]) / (cs[j] - cs[j - 1]) * (xs[j] - xs[j - 1]);
                    worst_p = std::max(worst_p, std::abs(percentile_gain(r, p) - oracle));
                }
            }
        return {worst_p <= 1e-9 && worst_c <= 1e-12 && monotone,
                fmt("10 maps, max percentile error %.2e dB, max CDF error %.2e, monotone ", worst_p, worst_c) +
                    (monotone ? "yes" : "no")};
    }

    Outcome grid_closure()
    {
        const auto r = SphericalGrid::regular(1, 10), u = SphericalGrid::uniform_sphere(301);
        const double er = std::abs(r.weight_sum() / four_pi - 1), eu = std::abs(u.weight_sum() / four_pi - 1);
        return {er <= 1e-3 && eu <= 1e-3, fmt("regular(1,10) rel. error %.2e, uniform(301) [%.0f points] rel. error %.2e",
                                              er, double(u.size()), eu)};
    }

    Outcome end_to_end()
    {
        const auto dir = testsupport::scratch("acceptance_e2e");
        save_pattern_csv(synthetic_array(SphericalGrid::regular(1, 10)), dir / "array.csv");
        testsupport::spit(dir / "run.json", reference_plan().to_json_text().insert(0, R"({"simulated": "array.csv", "plan": )") + "}");
        double slowest = 0;
        for (const char *out : {"a", "b"})
        {
            const auto t0 = std::chrono::steady_clock::now();
            const int rc = testsupport::run(std::string(ARRAYCOV_CLI_PATH) + " coverage --config '" + (dir / "run.json").string() +
                                            "' --output-dir '" + (dir / out).string() + "'");
            slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            if (rc != 0)
                return {false, "coverage exited with status " + std::to_string(rc)};
        }
        std::size_t files = 0, identical = 0;
        for (const auto &e : fs::directory_iterator(dir / "a"))
        {
            const auto name = e.path().filename();
            if (name == "manifest.json")
                continue;
            ++files;
            identical += testsupport::slurp(e.path()) == testsupport::slurp(dir / "b" / name);
        }
        const std::string summary = testsupport::slurp(dir / "a/summary.json");
        const bool counted = summary.find("\"realizations\": 2048") != std::string::npos &&
                             summary.find("\"points\": 6446") != std::string::npos;
        return {files == 5 && identical == files && counted && slowest < 60.0,
                fmt("6446 directions, 2048 realizations; slowest run %.2f s; %.0f/%.0f output files identical", slowest,
                    double(identical), double(files))};
    }

    Outcome mae_metric()
    {
        const auto grid = SphericalGrid::regular(1, 10);
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> u(-30, 10);
        std::vector<double> a(grid.size()), b(grid.size());
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            a[i] = std::pow(10.0, u(rng) / 10);
            b[i] = a[i] * std::pow(10.0, 0.03);
        }
        const GainMap ma(grid, a), mb(grid, b);
        double worst_offset = 0, worst_same = 0;
        const auto off = mae_per_theta_cut(mb, ma), same = mae_per_theta_cut(ma, ma);
        for (const auto &e : off)
            worst_offset = std::max(worst_offset, std::abs(e.mae_db - 0.3));
        for (const auto &e : same)
            worst_same = std::max(worst_same, e.mae_db);
        return {off.size() == 181 && same.size() == 181 && worst_offset < 1e-12 && worst_same == 0.0,
                fmt("181 rings; offset fixture max |mae - 0.3| = %.2e dB; identical maps max %.2e dB", worst_offset,
                    worst_same)};
    }
}

int main()
{
    const std::vector<Criterion> criteria = {
        {1, "enumeration counts", 1, enumeration_counts},
        {2, "thin-film reflection", 1, thin_film},
        {3, "skin-thickness delta", 1, skin_delta},
        {4, "coherent-combining oracle", 1, coherent_combining},
        {5, "array-factor oracle", 5, array_factor},
        {6, "quantization bound", 10, quantization_bound},
        {7, "de-embedding round trip", 1, deembed_round_trip},
        {8, "CDF correctness", 5, cdf_correctness},
        {9, "grid closure", 1, grid_closure},
        {10, "end-to-end determinism and scale", 120, end_to_end},
        {11, "MAE metric", 1, mae_metric},
    };
    int failed = 0;
    for (const auto &c : criteria)
    {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try
        {
            o = c.run();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && s <= c.limit_s;
        failed += !pass;
        std::printf("[%s] %2d %s: %s (%.3f s, limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), s,
                    c.limit_s);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed ? 1 : 0;
}
