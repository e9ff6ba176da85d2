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

#ifndef ARRAYCOV_DEEMBED_HPP
#define ARRAYCOV_DEEMBED_HPP

#include "pattern.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace arraycov
{
    // Main-beam region of one feed: |dtheta| <= half_width and wrapped
    // |dphi| <= half_width around the boresight.
    struct BeamWindow
    {
        Direction center;
        double half_width_deg = 60.0;

        bool contains(const Direction &d) const;
    };

    struct PortLoss
    {
        std::string feed;
        double loss_db = 0.0;
        double window_half_width_deg = 60.0;
    };

    class PortLossTable
    {
    public:
        PortLossTable() = default;
        explicit PortLossTable(std::vector<PortLoss> entries);

        const std::vector<PortLoss> &entries() const { return entries_; }
        std::size_t size() const { return entries_.size(); }

        // Throws a lookup error for unknown feeds.
        double loss_db(std::string_view feed) const;
        bool contains(std::string_view feed) const;

    private:
        std::vector<PortLoss> entries_;
    };

    enum class LossAveraging
    {
        DecibelMean,     // arithmetic mean of per-direction dB differences
        LinearPowerRatio // ratio of mean linear powers, then dB
    };

    struct DeembedOptions
    {
        double floor_db = -60.0;
        LossAveraging averaging = LossAveraging::DecibelMean;
    };

    // Per-feed loss = mean over the beam window of (G_sim,dB - G_meas,dB).
    // Directions where either gain is below the floor are skipped. Both sets
    // must share the grid and the feed labels; windows are keyed by feed.
    PortLossTable estimate_losses(const ElementPatternSet &simulated, const ElementPatternSet &measured,
                                  const std::map<std::string, BeamWindow> &windows,
                                  const DeembedOptions &options = {});

    // Scales every sample of feed f by 10^(loss_f / 20).
    ElementPatternSet apply_losses(const ElementPatternSet &measured, const PortLossTable &table);

    // CSV: feed,loss_db,window_halfwidth_deg
    void save_loss_table_csv(const PortLossTable &table, const std::filesystem::path &path);
    PortLossTable load_loss_table_csv(const std::filesystem::path &path);
}

#endif
