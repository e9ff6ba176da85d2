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

#ifndef ARRAYCOV_COVERAGE_HPP
#define ARRAYCOV_COVERAGE_HPP

#include "synth.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace arraycov
{
    // Linear power gain per grid direction, optionally tagged with the index
    // of the realization that produced it (-1 when unknown).
    class GainMap
    {
    public:
        GainMap() = default;
        GainMap(SphericalGrid grid, std::vector<double> gain, std::vector<std::int64_t> argmax = {});

        const SphericalGrid &grid() const { return grid_; }
        std::span<const double> gain() const { return gain_; }
        std::span<const std::int64_t> argmax() const { return argmax_; }
        double gain_db(std::size_t i) const;
        std::vector<double> gain_db() const;

    private:
        SphericalGrid grid_;
        std::vector<double> gain_;
        std::vector<std::int64_t> argmax_;
    };

    // Power gain of one feed as a map (no combining).
    GainMap element_gain_map(const ElementPatternSet &set, std::size_t feed);

    // max_k |g_k|^2 per direction; ties keep the lowest realization index.
    GainMap max_realized_gain(const SphericalGrid &grid, std::span<const Realization> realizations);

    // Fused synthesis + maximum without materializing the realizations.
    // threads == 0 picks the hardware concurrency. The result does not depend
    // on the thread count.
    GainMap max_realized_gain(const ElementPatternSet &set, const SynthesisPlan &plan, unsigned threads = 0);

    enum class CdfWeighting
    {
        SolidAngle, // direction weights from the grid
        SampleCount // every direction counts the same
    };

    class CoverageResult
    {
    public:
        CoverageResult() = default;
        CoverageResult(GainMap map, CdfWeighting weighting);

        const GainMap &map() const { return map_; }
        CdfWeighting weighting() const { return weighting_; }

        // Distinct gains in ascending dB order and the probability mass at or
        // below each of them.
        std::span<const double> sorted_gain_db() const { return sorted_db_; }
        std::span<const double> cumulative() const { return cumulative_; }

        // prob(G < x)
        double cdf(double x_db) const;

        std::string provenance;

    private:
        GainMap map_;
        CdfWeighting weighting_ = CdfWeighting::SolidAngle;
        std::vector<double> sorted_db_;
        std::vector<double> cumulative_;
    };

    // Requires a full-sphere grid for solid-angle weighting.
    CoverageResult coverage_cdf(const GainMap &map, CdfWeighting weighting = CdfWeighting::SolidAngle);

    // Smallest gain whose cumulative mass reaches p, interpolated linearly in
    // dB between the bracketing distinct gains. p must lie in (0, 1).
    double percentile_gain(const CoverageResult &result, double p);

    // percentile_gain(x, p) - percentile_gain(y, p) for every level.
    std::vector<double> compare_cdfs(const CoverageResult &x, const CoverageResult &y, std::span<const double> levels);

    struct ThetaCutError
    {
        double theta_deg;
        double mae_db;
        std::size_t samples;
    };

    // Mean over phi of |G_a,dB - G_b,dB| on each theta ring of a shared
    // regular grid. Samples where either gain is below floor_db are skipped;
    // rings with no remaining samples are omitted.
    std::vector<ThetaCutError> mae_per_theta_cut(const GainMap &a, const GainMap &b, double floor_db = -60.0);

    // theta_deg,phi_deg,weight_sr,gain_db
    void save_gain_map_csv(const GainMap &map, const std::filesystem::path &path);
    GainMap load_gain_map_csv(const std::filesystem::path &path);

    // gain_db,cdf with cdf = prob(G <= gain_db), one row per distinct gain.
    void save_cdf_csv(const CoverageResult &result, const std::filesystem::path &path);

    struct CdfSeries
    {
        std::string name;
        const CoverageResult *result;
    };

    std::string cdf_svg(std::span<const CdfSeries> series, const std::string &title);

    // Polar plot of the theta ring closest to 90 degrees.
    std::string azimuth_cut_svg(const GainMap &map, const std::string &title);
}

#endif
