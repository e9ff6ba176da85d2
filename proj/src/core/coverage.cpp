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

#include "coverage.hpp"
#include "error.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace arraycov
{
    GainMap::GainMap(SphericalGrid grid, std::vector<double> gain, std::vector<std::int64_t> argmax)
        : grid_(std::move(grid)), gain_(std::move(gain)), argmax_(std::move(argmax))
    {
        if (gain_.size() != grid_.size())
            fail(ErrorKind::InvalidArgument, "gain map size does not match grid");
        if (!argmax_.empty() && argmax_.size() != gain_.size())
            fail(ErrorKind::InvalidArgument, "argmax size does not match grid");
        for (double g : gain_)
            if (!(g >= 0.0) || !std::isfinite(g))
                fail(ErrorKind::InvalidArgument, "gains must be finite and non-negative");
    }

    double GainMap::gain_db(std::size_t i) const
    {
        return to_db(gain_[i]);
    }

    std::vector<double> GainMap::gain_db() const
    {
        std::vector<double> out(gain_.size());
        for (std::size_t i = 0; i < gain_.size(); ++i)
            out[i] = to_db(gain_[i]);
        return out;
    }

    GainMap element_gain_map(const ElementPatternSet &set, std::size_t feed)
    {
        if (feed >= set.feed_count())
            fail(ErrorKind::Lookup, "feed index out of range");
        std::vector<double> g;
        for (const auto &s : set.feed_samples(feed))
            g.push_back(s.power());
        return GainMap(set.grid(), std::move(g));
    }

    GainMap max_realized_gain(const SphericalGrid &grid, std::span<const Realization> realizations)
    {
        if (realizations.empty())
            fail(ErrorKind::InvalidArgument, "no realizations");
        std::vector<double> best(grid.size(), -1.0);
        std::vector<std::int64_t> arg(grid.size(), -1);
        for (std::size_t k = 0; k < realizations.size(); ++k)
        {
            const auto &p = realizations[k].pattern;
            if (p.size() != grid.size())
                fail(ErrorKind::InvalidArgument, "realization " + std::to_string(k) + " does not match the grid");
            for (std::size_t d = 0; d < p.size(); ++d)
            {
                const double g = p[d].power();
                if (g > best[d])
                {
                    best[d] = g;
                    arg[d] = std::int64_t(k);
                }
            }
        }
        return GainMap(grid, std::move(best), std::move(arg));
    }

    GainMap max_realized_gain(const ElementPatternSet &set, const SynthesisPlan &plan, unsigned threads)
    {
        const auto specs = plan.resolve(set);
        std::vector<std::vector<WeightVector>> weights;
        std::vector<std::size_t> first_id;
        std::size_t total = 0;
        for (const auto &spec : specs)
        {
            validate(spec, set);
            weights.push_back(enumerate_weights(spec, plan.bits()));
            first_id.push_back(total);
            total += weights.back().size();
        }

        const std::size_t dirs = set.grid().size();
        if (threads == 0)
            threads = std::max(1u, std::thread::hardware_concurrency());
        threads = unsigned(std::min<std::size_t>(threads, total));

        struct Partial
        {
            std::vector<double> best;
            std::vector<std::int64_t> arg;
        };
        std::vector<Partial> partial(threads);

        auto work = [&](unsigned t) {
            const std::size_t lo = total * t / threads, hi = total * (t + 1) / threads;
            auto &out = partial[t];
            out.best.assign(dirs, -1.0);
            out.arg.assign(dirs, -1);
            std::vector<PolarimetricSample> buffer(dirs);
            std::size_t s = 0;
            for (std::size_t id = lo; id < hi; ++id)
            {
                while (s + 1 < specs.size() && id >= first_id[s + 1])
                    ++s;
                synthesize_into(set, specs[s], weights[s][id - first_id[s]], buffer);
                for (std::size_t d = 0; d < dirs; ++d)
                {
                    const double g = buffer[d].power();
                    if (g > out.best[d])
                    {
                        out.best[d] = g;
                        out.arg[d] = std::int64_t(id);
                    }
                }
            }
        };

        if (threads == 1)
            work(0);
        else
        {
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < threads; ++t)
                pool.emplace_back(work, t);
        }

        // chunks are ordered by realization id, so strict '>' keeps the lowest id on ties
        auto &merged = partial[0];
        for (unsigned t = 1; t < threads; ++t)
            for (std::size_t d = 0; d < dirs; ++d)
                if (partial[t].best[d] > merged.best[d])
                {
                    merged.best[d] = partial[t].best[d];
                    merged.arg[d] = partial[t].arg[d];
                }
        return GainMap(set.grid(), std::move(merged.best), std::move(merged.arg));
    }

    CoverageResult::CoverageResult(GainMap map, CdfWeighting weighting)
        : map_(std::move(map)), weighting_(weighting)
    {
        const auto &grid = map_.grid();
        const std::size_t n = grid.size();
        if (n == 0)
            fail(ErrorKind::InvalidArgument, "empty gain map");

        std::vector<std::pair<double, double>> pts(n);
        for (std::size_t i = 0; i < n; ++i)
            pts[i] = {map_.gain_db(i), weighting == CdfWeighting::SolidAngle ? grid.weights()[i] : 1.0};
        std::sort(pts.begin(), pts.end());

        double running = 0.0;
        std::vector<double> mass;
        for (const auto &[g, w] : pts)
        {
            running += w;
            if (!sorted_db_.empty() && sorted_db_.back() == g)
                mass.back() = running;
            else
            {
                sorted_db_.push_back(g);
                mass.push_back(running);
            }
        }
        cumulative_.resize(mass.size());
        for (std::size_t i = 0; i < mass.size(); ++i)
            cumulative_[i] = mass[i] / running;
    }

    double CoverageResult::cdf(double x_db) const
    {
        const auto it = std::lower_bound(sorted_db_.begin(), sorted_db_.end(), x_db);
        if (it == sorted_db_.begin())
            return 0.0;
        return cumulative_[std::size_t(it - sorted_db_.begin()) - 1];
    }

    CoverageResult coverage_cdf(const GainMap &map, CdfWeighting weighting)
    {
        if (weighting == CdfWeighting::SolidAngle && !map.grid().is_full_sphere())
            fail(ErrorKind::InvalidArgument, "coverage CDF needs a full-sphere grid");
        return CoverageResult(map, weighting);
    }

    double percentile_gain(const CoverageResult &result, double p)
    {
        if (!(p > 0.0 && p < 1.0))
            fail(ErrorKind::InvalidArgument, "probability level must lie in (0, 1)");
        const auto g = result.sorted_gain_db();
        const auto c = result.cumulative();
        const std::size_t i = std::size_t(std::lower_bound(c.begin(), c.end(), p) - c.begin());
        if (i >= c.size())
            return g.back();
        if (i == 0 || std::isinf(g[i - 1]))
            return g[i];
        const double t = (p - c[i - 1]) / (c[i] - c[i - 1]);
        return g[i - 1] + t * (g[i] - g[i - 1]);
    }

    std::vector<double> compare_cdfs(const CoverageResult &x, const CoverageResult &y, std::span<const double> levels)
    {
        std::vector<double> out;
        for (double p : levels)
            out.push_back(percentile_gain(x, p) - percentile_gain(y, p));
        return out;
    }

    std::vector<ThetaCutError> mae_per_theta_cut(const GainMap &a, const GainMap &b, double floor_db)
    {
        const auto &grid = a.grid();
        if (grid.kind() != GridKind::Regular || b.grid().kind() != GridKind::Regular)
            fail(ErrorKind::Unsupported, "per-theta-cut error needs a regular grid");
        if (!grid.same_directions(b.grid()))
            fail(ErrorKind::InvalidArgument, "gain maps do not share a grid");

        std::vector<ThetaCutError> out;
        for (const auto &ring : grid.rings())
        {
            double sum = 0.0;
            std::size_t n = 0;
            for (std::size_t d = ring.first; d < ring.first + ring.count; ++d)
            {
                const double ga = a.gain_db(d), gb = b.gain_db(d);
                if (ga < floor_db || gb < floor_db)
                    continue;
                sum += std::abs(ga - gb);
                ++n;
            }
            if (n > 0)
                out.push_back({ring.theta_deg, sum / double(n), n});
        }
        return out;
    }

    void save_gain_map_csv(const GainMap &map, const std::filesystem::path &path)
    {
        std::string s = "theta_deg,phi_deg,weight_sr,gain_db\n";
        const auto &grid = map.grid();
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            const auto &d = grid.direction(i);
            s += text::format_double(d.theta_deg) + ',' + text::format_double(d.phi_deg) + ',' +
                 text::format_double(grid.weights()[i]) + ',' + text::format_double(map.gain_db(i)) + '\n';
        }
        text::write_file(path, s);
    }

    GainMap load_gain_map_csv(const std::filesystem::path &path)
    {
        const auto table = text::read_csv(path);
        const auto col = text::require_columns(table, {"theta_deg", "phi_deg", "weight_sr", "gain_db"}, path.string());
        if (table.rows.empty())
            fail(ErrorKind::Parse, path.string() + ": no samples");
        std::vector<Direction> dirs;
        std::vector<double> w, g;
        for (std::size_t i = 0; i < table.rows.size(); ++i)
        {
            const auto &row = table.rows[i];
            const std::string where = path.string() + ": row " + std::to_string(i + 1);
            if (row.size() != table.header.size())
                fail(ErrorKind::Parse, where + ": wrong field count");
            auto th = text::parse_double(row[col[0]]), ph = text::parse_double(row[col[1]]);
            auto wt = text::parse_double(row[col[2]]), db = text::parse_double(row[col[3]]);
            if (!th || !ph || !wt || !db || !std::isfinite(*th) || !std::isfinite(*ph) || !std::isfinite(*wt) ||
                std::isnan(*db) || *db == std::numeric_limits<double>::infinity())
                fail(ErrorKind::Parse, where + ": missing or invalid value");
            if (!(*wt > 0.0))
                fail(ErrorKind::Parse, where + ": weight must be positive");
            dirs.push_back({*th, *ph});
            w.push_back(*wt);
            g.push_back(std::isinf(*db) ? 0.0 : from_db(*db));
        }
        RingGrouping grouping;
        try
        {
            grouping = group_into_rings(dirs);
        }
        catch (const Error &e)
        {
            fail(e.kind(), path.string() + ": " + e.what());
        }
        auto grid = SphericalGrid::from_rings(std::move(grouping.rings));
        std::vector<double> weights(grid.size()), gains(grid.size());
        for (std::size_t i = 0; i < dirs.size(); ++i)
            if (grouping.index_of_row[i] != SIZE_MAX)
            {
                weights[grouping.index_of_row[i]] = w[i];
                gains[grouping.index_of_row[i]] = g[i];
            }
        return GainMap(grid.with_weights(std::move(weights)), std::move(gains));
    }

    void save_cdf_csv(const CoverageResult &result, const std::filesystem::path &path)
    {
        std::string s = "gain_db,cdf\n";
        const auto g = result.sorted_gain_db();
        const auto c = result.cumulative();
        for (std::size_t i = 0; i < g.size(); ++i)
            s += text::format_double(g[i]) + ',' + text::format_double(c[i]) + '\n';
        text::write_file(path, s);
    }

    namespace
    {
        constexpr const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

        std::string svg_header(int w, int h)
        {
            return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" +
                   std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
                   "\" font-family=\"sans-serif\" font-size=\"12\">\n"
                   "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        }

        std::string escape(const std::string &s)
        {
            std::string out;
            for (char c : s)
            {
                switch (c)
                {
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                case '&': out += "&amp;"; break;
                case '"': out += "&quot;"; break;
                default: out += c;
                }
            }
            return out;
        }
    }

    std::string cdf_svg(std::span<const CdfSeries> series, const std::string &title)
    {
        constexpr int W = 640, H = 440, L = 60, R = 20, T = 40, B = 50;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (const auto &s : series)
            for (double g : s.result->sorted_gain_db())
                if (std::isfinite(g))
                {
                    lo = std::min(lo, g);
                    hi = std::max(hi, g);
                }
        if (!std::isfinite(lo))
        {
            lo = -1.0;
            hi = 1.0;
        }
        lo = 5.0 * std::floor(lo / 5.0);
        hi = 5.0 * std::ceil(hi / 5.0);
        if (hi <= lo)
            hi = lo + 5.0;

        auto px = [&](double g) { return L + (std::max(g, lo) - lo) / (hi - lo) * (W - L - R); };
        auto py = [&](double c) { return H - B - c * (H - T - B); };

        std::string s = svg_header(W, H);
        s += "<text x=\"" + std::to_string(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
             escape(title) + "</text>\n";
        s += "<rect x=\"" + std::to_string(L) + "\" y=\"" + std::to_string(T) + "\" width=\"" +
             std::to_string(W - L - R) + "\" height=\"" + std::to_string(H - T - B) +
             "\" fill=\"none\" stroke=\"black\"/>\n";
        const double step = (hi - lo) > 40.0 ? 10.0 : 5.0;
        for (double g = lo; g <= hi + 1e-9; g += step)
        {
            const std::string x = text::format_fixed(px(g), 2);
            s += "<line x1=\"" + x + "\" y1=\"" + std::to_string(T) + "\" x2=\"" + x + "\" y2=\"" +
                 std::to_string(H - B) + "\" stroke=\"#dddddd\"/>\n";
            s += "<text x=\"" + x + "\" y=\"" + std::to_string(H - B + 16) + "\" text-anchor=\"middle\">" +
                 text::format_fixed(g, 0) + "</text>\n";
        }
        for (int k = 0; k <= 10; k += 2)
        {
            const std::string y = text::format_fixed(py(k / 10.0), 2);
            s += "<line x1=\"" + std::to_string(L) + "\" y1=\"" + y + "\" x2=\"" + std::to_string(W - R) +
                 "\" y2=\"" + y + "\" stroke=\"#dddddd\"/>\n";
            s += "<text x=\"" + std::to_string(L - 6) + "\" y=\"" + y + "\" text-anchor=\"end\">" +
                 text::format_fixed(k / 10.0, 1) + "</text>\n";
        }
        s += "<text x=\"" + std::to_string((W + L - R) / 2) + "\" y=\"" + std::to_string(H - 12) +
             "\" text-anchor=\"middle\">Maximum realized gain (dB)</text>\n";
        s += "<text x=\"16\" y=\"" + std::to_string((H + T - B) / 2) + "\" transform=\"rotate(-90 16 " +
             std::to_string((H + T - B) / 2) + ")\" text-anchor=\"middle\">CDF</text>\n";

        for (std::size_t k = 0; k < series.size(); ++k)
        {
            const auto g = series[k].result->sorted_gain_db();
            const auto c = series[k].result->cumulative();
            std::string pts;
            double prev = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i)
            {
                const std::string x = text::format_fixed(px(g[i]), 2);
                pts += x + ',' + text::format_fixed(py(prev), 2) + ' ' + x + ',' + text::format_fixed(py(c[i]), 2) + ' ';
                prev = c[i];
            }
            const char *color = palette[k % std::size(palette)];
            s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" +
                 pts + "\"/>\n";
            const int ly = T + 16 + int(k) * 16;
            s += "<line x1=\"" + std::to_string(L + 10) + "\" y1=\"" + std::to_string(ly - 4) + "\" x2=\"" +
                 std::to_string(L + 30) + "\" y2=\"" + std::to_string(ly - 4) + "\" stroke=\"" + color +
                 "\" stroke-width=\"2\"/>\n";
            s += "<text x=\"" + std::to_string(L + 36) + "\" y=\"" + std::to_string(ly) + "\">" +
                 escape(series[k].name) + "</text>\n";
        }
        s += "</svg>\n";
        return s;
    }

    std::string azimuth_cut_svg(const GainMap &map, const std::string &title)
    {
        constexpr int W = 480, H = 500, CX = 240, CY = 260, RAD = 200;
        constexpr double span_db = 40.0;
        const auto &grid = map.grid();
        const Ring *ring = nullptr;
        for (const auto &r : grid.rings())
            if (!ring || std::abs(r.theta_deg - 90.0) < std::abs(ring->theta_deg - 90.0))
                ring = &r;

        double top = -std::numeric_limits<double>::infinity();
        for (double g : map.gain_db())
            top = std::max(top, g);
        if (!std::isfinite(top))
            top = 0.0;
        top = 5.0 * std::ceil(top / 5.0);
        const double bottom = top - span_db;

        std::string s = svg_header(W, H);
        s += "<text x=\"" + std::to_string(W / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
             escape(title) + " (theta = " + text::format_fixed(ring->theta_deg, 1) + " deg)</text>\n";
        for (int k = 0; k <= 4; ++k)
        {
            const double r = RAD * k / 4.0;
            s += "<circle cx=\"" + std::to_string(CX) + "\" cy=\"" + std::to_string(CY) + "\" r=\"" +
                 text::format_fixed(r, 2) + "\" fill=\"none\" stroke=\"#dddddd\"/>\n";
            s += "<text x=\"" + std::to_string(CX + 3) + "\" y=\"" + text::format_fixed(CY - r - 2, 2) + "\">" +
                 text::format_fixed(bottom + span_db * k / 4.0, 0) + " dB</text>\n";
        }
        std::string pts;
        for (std::size_t d = ring->first; d < ring->first + ring->count; ++d)
        {
            const double g = std::clamp(map.gain_db(d), bottom, top);
            const double r = RAD * (g - bottom) / span_db;
            const double phi = grid.direction(d).phi_deg * deg2rad;
            pts += text::format_fixed(CX + r * std::cos(phi), 2) + ',' + text::format_fixed(CY - r * std::sin(phi), 2) + ' ';
        }
        s += "<polygon fill=\"none\" stroke=\"" + std::string(palette[0]) + "\" stroke-width=\"1.5\" points=\"" + pts +
             "\"/>\n</svg>\n";
        return s;
    }
}
