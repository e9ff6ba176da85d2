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

#include "pattern.hpp"
#include "error.hpp"
#include "text.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

namespace arraycov
{
    double to_db(double power)
    {
        if (power == 0.0)
            return -std::numeric_limits<double>::infinity();
        return 10.0 * std::log10(power);
    }

    double from_db(double db)
    {
        return std::pow(10.0, db / 10.0);
    }

    ElementPatternSet::ElementPatternSet(SphericalGrid grid, std::vector<std::string> feeds,
                                         std::vector<PolarimetricSample> samples, PatternMetadata meta)
        : grid_(std::move(grid)), feeds_(std::move(feeds)), samples_(std::move(samples)), meta_(std::move(meta))
    {
        if (feeds_.empty())
            fail(ErrorKind::InvalidArgument, "pattern set has no feeds");
        if (samples_.size() != feeds_.size() * grid_.size())
            fail(ErrorKind::InvalidArgument, "sample matrix does not match grid size times feed count");
        for (std::size_t i = 0; i < feeds_.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (feeds_[i] == feeds_[j])
                    fail(ErrorKind::InvalidArgument, "duplicate feed label '" + feeds_[i] + "'");
        for (const auto &s : samples_)
            if (!std::isfinite(s.g_theta.real()) || !std::isfinite(s.g_theta.imag()) ||
                !std::isfinite(s.g_phi.real()) || !std::isfinite(s.g_phi.imag()))
                fail(ErrorKind::InvalidArgument, "non-finite pattern sample");
    }

    std::size_t ElementPatternSet::feed_index(std::string_view label) const
    {
        for (std::size_t i = 0; i < feeds_.size(); ++i)
            if (feeds_[i] == label)
                return i;
        fail(ErrorKind::Lookup, "unknown feed '" + std::string(label) + "'");
    }

    double power_gain_db(const ElementPatternSet &set, std::string_view feed, const Direction &dir)
    {
        const std::size_t f = set.feed_index(feed);
        const auto idx = set.grid().find(dir);
        if (!idx)
            fail(ErrorKind::Lookup, "direction (" + text::format_double(dir.theta_deg) + ", " +
                                        text::format_double(dir.phi_deg) + ") is not on the grid");
        return to_db(set.sample(f, *idx).power());
    }

    std::filesystem::path sidecar_path(const std::filesystem::path &csv)
    {
        auto p = csv;
        p.replace_extension(".json");
        return p;
    }

    ElementPatternSet load_pattern_csv(const std::filesystem::path &path)
    {
        const auto table = text::read_csv(path);
        const std::string name = path.string();
        if (table.rows.empty())
            fail(ErrorKind::Parse, name + ": no samples");
        const auto col = text::require_columns(
            table, {"feed", "theta_deg", "phi_deg", "re_gtheta", "im_gtheta", "re_gphi", "im_gphi"}, name);

        struct Row { Direction d; PolarimetricSample s; };
        std::vector<std::string> feeds;
        std::vector<std::vector<Row>> per_feed;
        std::vector<std::vector<std::size_t>> file_rows;
        std::unordered_map<std::string, std::size_t> feed_of;

        for (std::size_t i = 0; i < table.rows.size(); ++i)
        {
            const auto &row = table.rows[i];
            const std::string where = name + ": row " + std::to_string(i + 1);
            if (row.size() != table.header.size())
                fail(ErrorKind::Parse, where + ": expected " + std::to_string(table.header.size()) + " fields");
            double v[6];
            for (int k = 0; k < 6; ++k)
            {
                auto parsed = text::parse_double(row[col[std::size_t(k) + 1]]);
                if (!parsed)
                    fail(ErrorKind::Parse, where + ": malformed number '" + row[col[std::size_t(k) + 1]] + "'");
                if (!std::isfinite(*parsed))
                    fail(ErrorKind::Parse, where + ": non-finite value");
                v[k] = *parsed;
            }
            const std::string &label = row[col[0]];
            if (label.empty())
                fail(ErrorKind::Parse, where + ": empty feed label");
            auto [it, inserted] = feed_of.try_emplace(label, feeds.size());
            if (inserted)
            {
                feeds.push_back(label);
                per_feed.emplace_back();
                file_rows.emplace_back();
            }
            per_feed[it->second].push_back({{v[0], v[1]}, {{v[2], v[3]}, {v[4], v[5]}}});
            file_rows[it->second].push_back(i + 1);
        }

        // The first feed defines the grid; every other feed must match it.
        std::vector<Direction> dirs;
        for (const auto &r : per_feed[0])
            dirs.push_back(r.d);
        RingGrouping grouping;
        try
        {
            grouping = group_into_rings(dirs, file_rows[0]);
        }
        catch (const Error &e)
        {
            fail(e.kind(), name + ": " + e.what());
        }
        SphericalGrid grid = SphericalGrid::from_rings(std::move(grouping.rings));

        std::vector<PolarimetricSample> samples(grid.size() * feeds.size());
        for (std::size_t i = 0; i < per_feed[0].size(); ++i)
            if (grouping.index_of_row[i] != SIZE_MAX)
                samples[grouping.index_of_row[i]] = per_feed[0][i].s;

        for (std::size_t f = 1; f < feeds.size(); ++f)
        {
            std::vector<char> seen(grid.size(), 0);
            for (std::size_t i = 0; i < per_feed[f].size(); ++i)
            {
                const auto &r = per_feed[f][i];
                const std::string where = name + ": row " + std::to_string(file_rows[f][i]);
                const auto idx = grid.find(r.d);
                if (!idx)
                    fail(ErrorKind::Parse, where + ": direction not on the grid of feed '" + feeds[0] + "'");
                if (seen[*idx])
                {
                    if (is_pole(r.d.theta_deg))
                        continue;
                    fail(ErrorKind::Parse, where + ": duplicate direction");
                }
                seen[*idx] = 1;
                samples[f * grid.size() + *idx] = r.s;
            }
            const auto missing = std::count(seen.begin(), seen.end(), 0);
            if (missing > 0)
                fail(ErrorKind::Parse, name + ": feed '" + feeds[f] + "' is missing " + std::to_string(missing) +
                                           " directions (row " + std::to_string(file_rows[f].back()) + ")");
        }

        PatternMetadata meta;
        const auto side = sidecar_path(path);
        if (std::filesystem::exists(side))
        {
            try
            {
                const auto j = nlohmann::json::parse(text::read_file(side));
                meta.frequency_ghz = j.value("frequency_ghz", meta.frequency_ghz);
                meta.convention = j.value("convention", meta.convention);
            }
            catch (const nlohmann::json::exception &e)
            {
                fail(ErrorKind::Parse, side.string() + ": " + e.what());
            }
            if (!(meta.frequency_ghz > 0.0))
                fail(ErrorKind::Parse, side.string() + ": frequency_ghz must be positive");
        }
        return ElementPatternSet(std::move(grid), std::move(feeds), std::move(samples), std::move(meta));
    }

    void append_pattern_rows(std::string &out, std::string_view label, const SphericalGrid &grid,
                             std::span<const PolarimetricSample> samples)
    {
        for (std::size_t d = 0; d < grid.size(); ++d)
        {
            const auto &dir = grid.direction(d);
            const auto &s = samples[d];
            out += label;
            out += ',';
            out += text::format_double(dir.theta_deg) + ',' + text::format_double(dir.phi_deg) + ',' +
                   text::format_double(s.g_theta.real()) + ',' + text::format_double(s.g_theta.imag()) + ',' +
                   text::format_double(s.g_phi.real()) + ',' + text::format_double(s.g_phi.imag()) + '\n';
        }
    }

    void save_pattern_csv(const ElementPatternSet &set, const std::filesystem::path &path)
    {
        std::string out = "feed,";
        out += pattern_csv_columns;
        out += '\n';
        for (std::size_t f = 0; f < set.feed_count(); ++f)
            append_pattern_rows(out, set.feeds()[f], set.grid(), set.feed_samples(f));
        text::write_file(path, out);

        nlohmann::ordered_json meta;
        meta["frequency_ghz"] = set.metadata().frequency_ghz;
        meta["convention"] = set.metadata().convention;
        text::write_file(sidecar_path(path), meta.dump(2) + "\n");
    }

    namespace
    {
        PolarimetricSample lerp(const PolarimetricSample &a, const PolarimetricSample &b, double t)
        {
            if (t == 0.0)
                return a;
            return {(1.0 - t) * a.g_theta + t * b.g_theta, (1.0 - t) * a.g_phi + t * b.g_phi};
        }

        // Linear interpolation along one ring; pole rings are constant in phi.
        PolarimetricSample eval_ring(std::span<const PolarimetricSample> feed, const Ring &ring, double step,
                                     double phi)
        {
            if (ring.count == 1)
                return feed[ring.first];
            const double pos = phi / step;
            double base = std::floor(pos);
            double frac = pos - base;
            const double nearest = std::round(pos);
            if (std::abs(pos - nearest) < 1e-9)
            {
                base = nearest;
                frac = 0.0;
            }
            const std::size_t j = std::size_t(base) % ring.count;
            const std::size_t j1 = (j + 1) % ring.count;
            return lerp(feed[ring.first + j], feed[ring.first + j1], frac);
        }
    }

    ElementPatternSet resample(const ElementPatternSet &set, const SphericalGrid &target)
    {
        const auto &src = set.grid();
        if (src.kind() != GridKind::Regular)
            fail(ErrorKind::Unsupported, "resampling requires a regular source grid");
        if (target.empty())
            fail(ErrorKind::InvalidArgument, "empty target grid");

        const auto rings = src.rings();
        const double step = src.phi_step();
        std::vector<PolarimetricSample> out(target.size() * set.feed_count());
        for (std::size_t d = 0; d < target.size(); ++d)
        {
            const auto &dir = target.direction(d);
            auto it = std::upper_bound(rings.begin(), rings.end(), dir.theta_deg,
                                       [](double t, const Ring &r) { return t < r.theta_deg; });
            std::size_t lo = it == rings.begin() ? 0 : std::size_t(it - rings.begin()) - 1;
            if (lo + 1 >= rings.size())
                lo = rings.size() - 1;
            double t = 0.0;
            if (lo + 1 < rings.size())
                t = (dir.theta_deg - rings[lo].theta_deg) / (rings[lo + 1].theta_deg - rings[lo].theta_deg);
            double phi = std::fmod(dir.phi_deg, 360.0);
            if (phi < 0.0)
                phi += 360.0;

            for (std::size_t f = 0; f < set.feed_count(); ++f)
            {
                const auto feed = set.feed_samples(f);
                const auto a = eval_ring(feed, rings[lo], step, phi);
                out[f * target.size() + d] =
                    t == 0.0 ? a : lerp(a, eval_ring(feed, rings[lo + 1], step, phi), t);
            }
        }
        return ElementPatternSet(target, set.feeds(), std::move(out), set.metadata());
    }
}
