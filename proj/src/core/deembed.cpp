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

#include "deembed.hpp"
#include "error.hpp"
#include "text.hpp"

#include <cmath>

namespace arraycov
{
    bool BeamWindow::contains(const Direction &d) const
    {
        if (std::abs(d.theta_deg - center.theta_deg) > half_width_deg)
            return false;
        if (is_pole(d.theta_deg))
            return true;
        double dphi = std::fmod(std::abs(d.phi_deg - center.phi_deg), 360.0);
        dphi = std::min(dphi, 360.0 - dphi);
        return dphi <= half_width_deg;
    }

    PortLossTable::PortLossTable(std::vector<PortLoss> entries) : entries_(std::move(entries))
    {
        for (std::size_t i = 0; i < entries_.size(); ++i)
        {
            const auto &e = entries_[i];
            if (!std::isfinite(e.loss_db))
                fail(ErrorKind::InvalidArgument, "loss for feed '" + e.feed + "' is not finite");
            if (!(e.window_half_width_deg > 0.0 && e.window_half_width_deg <= 90.0))
                fail(ErrorKind::InvalidArgument, "window half-width for feed '" + e.feed + "' must be in (0, 90]");
            for (std::size_t j = 0; j < i; ++j)
                if (entries_[j].feed == e.feed)
                    fail(ErrorKind::InvalidArgument, "duplicate feed '" + e.feed + "' in loss table");
        }
    }

    bool PortLossTable::contains(std::string_view feed) const
    {
        for (const auto &e : entries_)
            if (e.feed == feed)
                return true;
        return false;
    }

    double PortLossTable::loss_db(std::string_view feed) const
    {
        for (const auto &e : entries_)
            if (e.feed == feed)
                return e.loss_db;
        fail(ErrorKind::Lookup, "loss table has no entry for feed '" + std::string(feed) + "'");
    }

    PortLossTable estimate_losses(const ElementPatternSet &simulated, const ElementPatternSet &measured,
                                  const std::map<std::string, BeamWindow> &windows, const DeembedOptions &options)
    {
        if (!simulated.grid().same_directions(measured.grid()))
            fail(ErrorKind::InvalidArgument, "simulated and measured patterns must share a grid (resample first)");
        if (simulated.feed_count() != measured.feed_count())
            fail(ErrorKind::Lookup, "simulated and measured patterns have different feed sets");
        for (const auto &f : simulated.feeds())
            (void)measured.feed_index(f);

        const auto &grid = simulated.grid();
        std::vector<PortLoss> out;
        for (std::size_t fs = 0; fs < simulated.feed_count(); ++fs)
        {
            const std::string &label = simulated.feeds()[fs];
            const auto w = windows.find(label);
            if (w == windows.end())
                fail(ErrorKind::Lookup, "no beam window configured for feed '" + label + "'");
            if (!(w->second.half_width_deg > 0.0 && w->second.half_width_deg <= 90.0))
                fail(ErrorKind::InvalidArgument, "window half-width for feed '" + label + "' must be in (0, 90]");
            const std::size_t fm = measured.feed_index(label);

            double sum_db = 0.0, sum_sim = 0.0, sum_meas = 0.0;
            std::size_t n = 0;
            for (std::size_t d = 0; d < grid.size(); ++d)
            {
                if (!w->second.contains(grid.direction(d)))
                    continue;
                const double ps = simulated.sample(fs, d).power();
                const double pm = measured.sample(fm, d).power();
                const double gs = to_db(ps), gm = to_db(pm);
                if (gs < options.floor_db || gm < options.floor_db)
                    continue;
                sum_db += gs - gm;
                sum_sim += ps;
                sum_meas += pm;
                ++n;
            }
            if (n == 0)
                fail(ErrorKind::Estimation, "feed '" + label + "': beam window is empty after floor exclusion");
            const double loss = options.averaging == LossAveraging::DecibelMean
                                    ? sum_db / double(n)
                                    : to_db(sum_sim) - to_db(sum_meas);
            out.push_back({label, loss, w->second.half_width_deg});
        }
        return PortLossTable(std::move(out));
    }

    ElementPatternSet apply_losses(const ElementPatternSet &measured, const PortLossTable &table)
    {
        std::vector<PolarimetricSample> samples(measured.samples().begin(), measured.samples().end());
        const std::size_t n = measured.grid().size();
        for (std::size_t f = 0; f < measured.feed_count(); ++f)
        {
            const double scale = std::pow(10.0, table.loss_db(measured.feeds()[f]) / 20.0);
            for (std::size_t d = 0; d < n; ++d)
            {
                auto &s = samples[f * n + d];
                s.g_theta *= scale;
                s.g_phi *= scale;
            }
        }
        return ElementPatternSet(measured.grid(), measured.feeds(), std::move(samples), measured.metadata());
    }

    void save_loss_table_csv(const PortLossTable &table, const std::filesystem::path &path)
    {
        std::string s = "feed,loss_db,window_halfwidth_deg\n";
        for (const auto &e : table.entries())
            s += e.feed + ',' + text::format_double(e.loss_db) + ',' + text::format_double(e.window_half_width_deg) + '\n';
        text::write_file(path, s);
    }

    PortLossTable load_loss_table_csv(const std::filesystem::path &path)
    {
        const auto table = text::read_csv(path);
        const auto col = text::require_columns(table, {"feed", "loss_db", "window_halfwidth_deg"}, path.string());
        std::vector<PortLoss> entries;
        for (std::size_t i = 0; i < table.rows.size(); ++i)
        {
            const auto &row = table.rows[i];
            const std::string where = path.string() + ": row " + std::to_string(i + 1);
            if (row.size() != table.header.size())
                fail(ErrorKind::Parse, where + ": wrong field count");
            auto loss = text::parse_double(row[col[1]]);
            auto hw = text::parse_double(row[col[2]]);
            if (!loss || !hw || !std::isfinite(*loss) || !std::isfinite(*hw))
                fail(ErrorKind::Parse, where + ": missing or non-finite value");
            entries.push_back({row[col[0]], *loss, *hw});
        }
        try
        {
            return PortLossTable(std::move(entries));
        }
        catch (const Error &e)
        {
            fail(ErrorKind::Parse, path.string() + ": " + e.what());
        }
    }
}
