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

#ifndef ARRAYCOV_PATTERN_HPP
#define ARRAYCOV_PATTERN_HPP

#include "grid.hpp"

#include <complex>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arraycov
{
    using cplx = std::complex<double>;

    // Complex far-field gain resolved into theta and phi polarizations, in
    // linear field units such that |g_theta|^2 + |g_phi|^2 is the realized
    // power gain.
    struct PolarimetricSample
    {
        cplx g_theta{};
        cplx g_phi{};

        double power() const { return std::norm(g_theta) + std::norm(g_phi); }
    };

    // 10 log10(p); exact zero maps to -inf.
    double to_db(double power);
    double from_db(double db);

    inline constexpr std::string_view realized_gain_embedded = "realized-gain-embedded";

    struct PatternMetadata
    {
        double frequency_ghz = 28.0;
        std::string convention{realized_gain_embedded};
    };

    // Per-feed polarimetric patterns sampled on one grid. Samples are stored
    // feed-major: sample(f, d) lives at f * grid.size() + d.
    class ElementPatternSet
    {
    public:
        ElementPatternSet() = default;
        ElementPatternSet(SphericalGrid grid, std::vector<std::string> feeds,
                          std::vector<PolarimetricSample> samples, PatternMetadata meta = {});

        const SphericalGrid &grid() const { return grid_; }
        const std::vector<std::string> &feeds() const { return feeds_; }
        std::size_t feed_count() const { return feeds_.size(); }
        const PatternMetadata &metadata() const { return meta_; }

        // Throws a lookup error for unknown labels.
        std::size_t feed_index(std::string_view label) const;

        std::span<const PolarimetricSample> feed_samples(std::size_t feed) const
        {
            return std::span(samples_).subspan(feed * grid_.size(), grid_.size());
        }
        const PolarimetricSample &sample(std::size_t feed, std::size_t dir) const
        {
            return samples_[feed * grid_.size() + dir];
        }
        std::span<const PolarimetricSample> samples() const { return samples_; }

    private:
        SphericalGrid grid_;
        std::vector<std::string> feeds_;
        std::vector<PolarimetricSample> samples_;
        PatternMetadata meta_;
    };

    double power_gain_db(const ElementPatternSet &set, std::string_view feed, const Direction &dir);

    // Sidecar metadata lives next to the CSV with the extension replaced by .json.
    std::filesystem::path sidecar_path(const std::filesystem::path &csv);

    ElementPatternSet load_pattern_csv(const std::filesystem::path &path);
    void save_pattern_csv(const ElementPatternSet &set, const std::filesystem::path &path);

    // Appends pattern rows for one labelled sample block to a CSV body.
    void append_pattern_rows(std::string &out, std::string_view label, const SphericalGrid &grid,
                             std::span<const PolarimetricSample> samples);

    inline constexpr std::string_view pattern_csv_columns =
        "theta_deg,phi_deg,re_gtheta,im_gtheta,re_gphi,im_gphi";

    // Bilinear interpolation in (theta, phi) of the real and imaginary parts
    // of both components. The source grid must be regular.
    ElementPatternSet resample(const ElementPatternSet &set, const SphericalGrid &target);
}

#endif
