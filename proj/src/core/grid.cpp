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

#include "grid.hpp"
#include "error.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

namespace arraycov
{
    namespace
    {
        constexpr double lattice_tolerance_deg = 1e-6;

        double wrap_phi(double phi)
        {
            double w = std::fmod(phi, 360.0);
            if (w < 0.0)
                w += 360.0;
            if (w >= 360.0)
                w -= 360.0;
            return w;
        }

        // Index of the first sample that breaks the even phi lattice, if any.
        std::optional<std::size_t> lattice_defect(const std::vector<double> &phis)
        {
            const std::size_t n = phis.size();
            if (n <= 1)
                return std::nullopt;
            const double step = 360.0 / double(n);
            for (std::size_t k = 1; k < n; ++k)
                if (std::abs(phis[k] - (phis[0] + double(k) * step)) > lattice_tolerance_deg)
                    return k;
            if (phis[0] >= step - lattice_tolerance_deg)
                return 0;
            return std::nullopt;
        }

        // Band edges halfway between neighbouring rings; rings at the poles
        // own the full polar cap.
        std::vector<double> band_weights(const std::vector<RingSamples> &rings)
        {
            std::vector<double> out;
            const std::size_t m = rings.size();
            for (std::size_t i = 0; i < m; ++i)
            {
                const double th = rings[i].theta_deg;
                double lo, hi;
                if (i == 0)
                    lo = (is_pole(th) || m == 1) ? 0.0 : std::max(0.0, th - 0.5 * (rings[1].theta_deg - th));
                else
                    lo = 0.5 * (rings[i - 1].theta_deg + th);
                if (i + 1 == m)
                    hi = (is_pole(th) || m == 1) ? 180.0 : std::min(180.0, th + 0.5 * (th - rings[i - 1].theta_deg));
                else
                    hi = 0.5 * (th + rings[i + 1].theta_deg);
                const double band = 2.0 * pi * (std::cos(lo * deg2rad) - std::cos(hi * deg2rad));
                const double w = band / double(rings[i].phi_deg.size());
                out.insert(out.end(), rings[i].phi_deg.size(), w);
            }
            return out;
        }

        std::size_t uniform_total(int rings, int n_eq)
        {
            std::size_t total = 2;
            for (int r = 1; r < rings; ++r)
                total += std::size_t(std::max(1L, std::lround(n_eq * std::sin(pi * std::min(r, rings - r) / rings))));
            return total;
        }
    }

    bool is_pole(double theta_deg)
    {
        return std::abs(theta_deg) <= angle_tolerance_deg || std::abs(theta_deg - 180.0) <= angle_tolerance_deg;
    }

    bool same_direction(const Direction &a, const Direction &b, double tol_deg)
    {
        if (std::abs(a.theta_deg - b.theta_deg) > tol_deg)
            return false;
        if (is_pole(a.theta_deg))
            return true;
        double d = std::abs(wrap_phi(a.phi_deg) - wrap_phi(b.phi_deg));
        d = std::min(d, 360.0 - d);
        return d <= tol_deg;
    }

    double angular_distance_deg(const Direction &a, const Direction &b)
    {
        const double t1 = a.theta_deg * deg2rad, t2 = b.theta_deg * deg2rad;
        const double dp = (a.phi_deg - b.phi_deg) * deg2rad;
        const double x1 = std::sin(t1), z1 = std::cos(t1);
        const double x2 = std::sin(t2) * std::cos(dp), y2 = std::sin(t2) * std::sin(dp), z2 = std::cos(t2);
        // atan2 form stays accurate for small separations
        const double cx = -z1 * y2, cy = z1 * x2 - x1 * z2, cz = x1 * y2;
        const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
        const double dot = x1 * x2 + z1 * z2;
        return std::atan2(cross, dot) / deg2rad;
    }

    SphericalGrid SphericalGrid::regular(double theta_step_deg, double phi_step_deg)
    {
        if (!(theta_step_deg > 0.0) || !(phi_step_deg > 0.0))
            fail(ErrorKind::InvalidArgument, "grid steps must be positive");
        const double nt = 180.0 / theta_step_deg, np = 360.0 / phi_step_deg;
        const long n_theta = std::lround(nt), n_phi = std::lround(np);
        if (std::abs(nt - double(n_theta)) > 1e-9 || std::abs(np - double(n_phi)) > 1e-9)
            fail(ErrorKind::InvalidArgument, "theta step must divide 180 and phi step must divide 360");

        std::vector<RingSamples> rings;
        rings.reserve(std::size_t(n_theta) + 1);
        for (long i = 0; i <= n_theta; ++i)
        {
            RingSamples r{double(i) * theta_step_deg, {}};
            if (i == 0 || i == n_theta)
            {
                r.theta_deg = i == 0 ? 0.0 : 180.0;
                r.phi_deg = {0.0};
            }
            else
                for (long k = 0; k < n_phi; ++k)
                    r.phi_deg.push_back(double(k) * phi_step_deg);
            rings.push_back(std::move(r));
        }
        auto grid = from_rings(std::move(rings));
        grid.kind_ = GridKind::Regular;
        grid.theta_step_ = theta_step_deg;
        grid.phi_step_ = phi_step_deg;
        return grid;
    }

    SphericalGrid SphericalGrid::uniform_sphere(int target_count)
    {
        if (target_count < 6)
            fail(ErrorKind::InvalidArgument, "uniform grid needs at least 6 directions");

        // Pick the ring count M and equator sample count n_eq. Prefer layouts
        // within 2 % of the target with n_eq closest to 2M (equal spacing in
        // theta and phi at the equator).
        const std::size_t target = std::size_t(target_count);
        const std::size_t tol = target / 50;
        struct Pick { int rings; int n_eq; std::size_t miss; int aspect; };
        std::optional<Pick> within, closest;
        for (int m = 2; double(m) * m * 4.0 / pi <= 4.0 * double(target) + 16.0; ++m)
        {
            for (int n_eq = std::max(1, m); n_eq <= 4 * m; ++n_eq)
            {
                const std::size_t total = uniform_total(m, n_eq);
                const std::size_t miss = total > target ? total - target : target - total;
                const Pick p{m, n_eq, miss, std::abs(n_eq - 2 * m)};
                if (miss <= tol && (!within || p.aspect < within->aspect ||
                                    (p.aspect == within->aspect && p.miss < within->miss)))
                    within = p;
                if (!closest || p.miss < closest->miss ||
                    (p.miss == closest->miss && p.aspect < closest->aspect))
                    closest = p;
            }
        }
        const Pick pick = within ? *within : *closest;

        std::vector<RingSamples> rings;
        for (int r = 0; r <= pick.rings; ++r)
        {
            RingSamples ring{180.0 * r / pick.rings, {}};
            if (r == 0 || r == pick.rings)
                ring.phi_deg = {0.0};
            else
            {
                const long n = std::max(1L, std::lround(pick.n_eq * std::sin(pi * std::min(r, pick.rings - r) / pick.rings)));
                for (long k = 0; k < n; ++k)
                    ring.phi_deg.push_back(360.0 * double(k) / double(n));
            }
            rings.push_back(std::move(ring));
        }
        auto grid = from_rings(std::move(rings));
        grid.kind_ = GridKind::UniformSphere;
        return grid;
    }

    SphericalGrid SphericalGrid::from_rings(std::vector<RingSamples> rings)
    {
        if (rings.empty())
            fail(ErrorKind::InvalidArgument, "grid has no directions");
        for (std::size_t i = 0; i < rings.size(); ++i)
        {
            const auto &r = rings[i];
            if (!(r.theta_deg >= 0.0 && r.theta_deg <= 180.0))
                fail(ErrorKind::InvalidArgument, "ring theta out of [0, 180]");
            if (i > 0 && !(r.theta_deg > rings[i - 1].theta_deg + angle_tolerance_deg))
                fail(ErrorKind::InvalidArgument, "ring thetas must be strictly increasing");
            if (r.phi_deg.empty())
                fail(ErrorKind::InvalidArgument, "empty ring");
            if (is_pole(r.theta_deg) && r.phi_deg.size() != 1)
                fail(ErrorKind::InvalidArgument, "pole ring must hold a single sample");
            for (double p : r.phi_deg)
                if (!(p >= 0.0 && p < 360.0))
                    fail(ErrorKind::InvalidArgument, "phi out of [0, 360)");
            if (lattice_defect(r.phi_deg))
                fail(ErrorKind::InvalidArgument, "ragged ring at theta=" + text::format_double(r.theta_deg));
        }

        SphericalGrid g;
        g.weights_ = band_weights(rings);
        for (const auto &r : rings)
        {
            g.rings_.push_back({r.theta_deg, g.directions_.size(), r.phi_deg.size()});
            for (double p : r.phi_deg)
                g.directions_.push_back({r.theta_deg, is_pole(r.theta_deg) ? 0.0 : p});
        }

        // classification
        const std::size_t m = rings.size();
        bool regular = m >= 3 && is_pole(rings.front().theta_deg) && is_pole(rings.back().theta_deg) &&
                       rings.front().theta_deg < 90.0 && rings.back().theta_deg > 90.0;
        if (regular)
        {
            const double step = 180.0 / double(m - 1);
            const std::size_t n = rings[1].phi_deg.size();
            for (std::size_t i = 1; i + 1 < m && regular; ++i)
            {
                regular = std::abs(rings[i].theta_deg - double(i) * step) <= lattice_tolerance_deg &&
                          rings[i].phi_deg.size() == n && rings[i].phi_deg.front() == 0.0;
            }
            if (regular)
            {
                g.theta_step_ = step;
                g.phi_step_ = 360.0 / double(n);
            }
        }
        g.kind_ = regular ? GridKind::Regular : GridKind::UniformSphere;
        return g;
    }

    double SphericalGrid::weight_sum() const
    {
        return std::accumulate(weights_.begin(), weights_.end(), 0.0);
    }

    bool SphericalGrid::is_full_sphere() const
    {
        if (rings_.empty() || !is_pole(rings_.front().theta_deg) || !is_pole(rings_.back().theta_deg) ||
            rings_.front().theta_deg > 90.0 || rings_.back().theta_deg < 90.0)
            return false;
        return std::abs(weight_sum() - four_pi) <= 1e-3 * four_pi;
    }

    std::optional<std::size_t> SphericalGrid::find(const Direction &d) const
    {
        auto it = std::lower_bound(rings_.begin(), rings_.end(), d.theta_deg - angle_tolerance_deg,
                                   [](const Ring &r, double t) { return r.theta_deg < t; });
        if (it == rings_.end() || std::abs(it->theta_deg - d.theta_deg) > angle_tolerance_deg)
            return std::nullopt;
        if (it->count == 1 && is_pole(it->theta_deg))
            return it->first;
        const double step = 360.0 / double(it->count);
        const double offset = directions_[it->first].phi_deg;
        const double pos = wrap_phi(d.phi_deg - offset) / step;
        const std::size_t k = std::size_t(std::llround(pos)) % it->count;
        if (!same_direction(directions_[it->first + k], d))
            return std::nullopt;
        return it->first + k;
    }

    bool SphericalGrid::same_directions(const SphericalGrid &other) const
    {
        if (size() != other.size())
            return false;
        for (std::size_t i = 0; i < size(); ++i)
            if (!same_direction(directions_[i], other.directions_[i]))
                return false;
        return true;
    }

    SphericalGrid SphericalGrid::with_weights(std::vector<double> weights) const
    {
        if (weights.size() != size())
            fail(ErrorKind::InvalidArgument, "weight count does not match grid size");
        for (double w : weights)
            if (!(w > 0.0) || !std::isfinite(w))
                fail(ErrorKind::InvalidArgument, "grid weights must be positive and finite");
        SphericalGrid g = *this;
        g.weights_ = std::move(weights);
        return g;
    }

    std::vector<double> solid_angle_weights(const SphericalGrid &grid)
    {
        return {grid.weights().begin(), grid.weights().end()};
    }

    RingGrouping group_into_rings(std::span<const Direction> rows, std::span<const std::size_t> row_numbers)
    {
        auto row_name = [&](std::size_t i) {
            return "row " + std::to_string(row_numbers.empty() ? i + 1 : row_numbers[i]);
        };
        struct Entry { Direction d; std::size_t row; };
        std::vector<Entry> entries;
        entries.reserve(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            const auto &d = rows[i];
            const std::string where = row_name(i);
            if (!std::isfinite(d.theta_deg) || !std::isfinite(d.phi_deg))
                fail(ErrorKind::Parse, where + ": non-finite direction");
            if (d.theta_deg < 0.0 || d.theta_deg > 180.0)
                fail(ErrorKind::Parse, where + ": theta outside [0, 180]");
            if (d.phi_deg < 0.0 || d.phi_deg >= 360.0)
                fail(ErrorKind::Parse, where + ": phi outside [0, 360)");
            entries.push_back({d, i});
        }
        std::stable_sort(entries.begin(), entries.end(), [](const Entry &a, const Entry &b) {
            if (a.d.theta_deg != b.d.theta_deg)
                return a.d.theta_deg < b.d.theta_deg;
            if (is_pole(a.d.theta_deg))
                return false;
            return a.d.phi_deg < b.d.phi_deg;
        });

        RingGrouping out;
        out.index_of_row.assign(rows.size(), SIZE_MAX);
        std::vector<std::vector<std::size_t>> ring_rows;
        for (const auto &e : entries)
        {
            const bool new_ring = out.rings.empty() ||
                                  std::abs(e.d.theta_deg - out.rings.back().theta_deg) > angle_tolerance_deg;
            if (new_ring)
            {
                out.rings.push_back({is_pole(e.d.theta_deg) ? std::round(e.d.theta_deg) : e.d.theta_deg, {}});
                ring_rows.emplace_back();
            }
            auto &ring = out.rings.back();
            if (is_pole(ring.theta_deg))
            {
                if (ring.phi_deg.empty())
                {
                    ring.phi_deg.push_back(0.0);
                    ring_rows.back().push_back(e.row);
                }
                continue; // duplicate pole rows collapse onto the first one
            }
            if (!ring.phi_deg.empty() && std::abs(ring.phi_deg.back() - e.d.phi_deg) <= angle_tolerance_deg)
                fail(ErrorKind::Parse, row_name(e.row) + ": duplicate direction");
            ring.phi_deg.push_back(e.d.phi_deg);
            ring_rows.back().push_back(e.row);
        }

        std::size_t index = 0;
        for (std::size_t r = 0; r < out.rings.size(); ++r)
        {
            if (auto bad = lattice_defect(out.rings[r].phi_deg))
                fail(ErrorKind::Parse, row_name(ring_rows[r][*bad]) +
                                           ": ragged ring at theta=" + text::format_double(out.rings[r].theta_deg));
            for (std::size_t row : ring_rows[r])
                out.index_of_row[row] = index++;
        }
        return out;
    }

    void save_grid_csv(const SphericalGrid &grid, const std::filesystem::path &path)
    {
        std::string s = "theta_deg,phi_deg,weight_sr\n";
        for (std::size_t i = 0; i < grid.size(); ++i)
        {
            const auto &d = grid.direction(i);
            s += text::format_double(d.theta_deg) + ',' + text::format_double(d.phi_deg) + ',' +
                 text::format_double(grid.weights()[i]) + '\n';
        }
        text::write_file(path, s);
    }

    SphericalGrid load_grid_csv(const std::filesystem::path &path)
    {
        const auto table = text::read_csv(path);
        if (table.header.empty() && table.rows.empty())
            fail(ErrorKind::Parse, path.string() + ": no samples");
        const auto col = text::require_columns(table, {"theta_deg", "phi_deg", "weight_sr"}, path.string());
        if (table.rows.empty())
            fail(ErrorKind::Parse, path.string() + ": no samples");

        std::vector<Direction> dirs;
        std::vector<double> w;
        for (std::size_t i = 0; i < table.rows.size(); ++i)
        {
            const auto &row = table.rows[i];
            const std::string where = path.string() + ": row " + std::to_string(i + 1);
            if (row.size() < table.header.size())
                fail(ErrorKind::Parse, where + ": too few fields");
            auto th = text::parse_double(row[col[0]]), ph = text::parse_double(row[col[1]]),
                 wt = text::parse_double(row[col[2]]);
            if (!th || !ph || !wt || !std::isfinite(*th) || !std::isfinite(*ph) || !std::isfinite(*wt))
                fail(ErrorKind::Parse, where + ": missing or non-finite value");
            if (!(*wt > 0.0))
                fail(ErrorKind::Parse, where + ": weight must be positive");
            dirs.push_back({*th, *ph});
            w.push_back(*wt);
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
        std::vector<double> weights(grid.size(), 0.0);
        for (std::size_t i = 0; i < dirs.size(); ++i)
            if (grouping.index_of_row[i] != SIZE_MAX)
                weights[grouping.index_of_row[i]] = w[i];
        return grid.with_weights(std::move(weights));
    }
}
