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

#ifndef ARRAYCOV_SYNTH_HPP
#define ARRAYCOV_SYNTH_HPP

#include "pattern.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace arraycov
{
    // Feeds combined by one weight vector, resolved to indices in a pattern set.
    struct SubArraySpec
    {
        std::string label;
        std::vector<std::size_t> feed_indices;
    };

    // Sub-array as written in configuration, by feed label.
    struct SubArrayDefinition
    {
        std::string label;
        std::vector<std::string> feeds;
    };

    // Phase-only weights on the 2^bits lattice. Element 0 is the reference
    // and always carries phase step 0; every element has amplitude 1/sqrt(N).
    struct WeightVector
    {
        std::vector<unsigned> steps; // phase_i = steps[i] * 360 / 2^bits
        int bits = 3;

        std::vector<double> phases_deg() const;
        double amplitude() const;
    };

    // Upper bound on the number of weight vectors enumerated per sub-array.
    inline constexpr std::size_t max_weight_vectors = 10'000'000;

    // 2^(bits * (N - 1)); throws a capacity error above max_weight_vectors and
    // invalid-argument for bits outside [1, 6] or N == 0.
    std::size_t weight_count(std::size_t elements, int bits);

    // All weight vectors in lexicographic order of the phase lists.
    std::vector<WeightVector> enumerate_weights(const SubArraySpec &spec, int bits);

    // e^{j 2 pi step / 2^bits}, exact at multiples of a quarter turn.
    cplx lattice_phasor(unsigned step, int bits);

    class SynthesisPlan
    {
    public:
        SynthesisPlan() = default;
        SynthesisPlan(std::vector<SubArrayDefinition> subarrays, int bits = 3);

        const std::vector<SubArrayDefinition> &subarrays() const { return subarrays_; }
        int bits() const { return bits_; }

        // Sum over sub-arrays of 2^(bits * (N - 1)).
        std::size_t realization_count() const;

        // Maps feed labels to indices; throws a lookup error for unknown labels.
        std::vector<SubArraySpec> resolve(const ElementPatternSet &set) const;

        // {"bits": 3, "subarrays": [{"label": "...", "feeds": ["1V", ...]}, ...]}
        static SynthesisPlan from_json_text(const std::string &text);
        std::string to_json_text() const;

    private:
        std::vector<SubArrayDefinition> subarrays_;
        int bits_ = 3;
    };

    void validate(const SubArraySpec &spec, const ElementPatternSet &set);

    // g(dir) = 1/sqrt(N) * sum_i e^{j phase_i} g_i(dir), per polarization.
    std::vector<PolarimetricSample> synthesize(const ElementPatternSet &set, const SubArraySpec &spec,
                                               const WeightVector &w);

    // Same as synthesize() writing into a caller buffer of grid size.
    void synthesize_into(const ElementPatternSet &set, const SubArraySpec &spec, const WeightVector &w,
                         std::span<PolarimetricSample> out);

    struct Realization
    {
        std::string subarray;
        std::size_t weight_index = 0;
        std::vector<PolarimetricSample> pattern;
    };

    // Every realization of the plan: sub-array order, then weight order.
    // Materializes all patterns; prefer for_each_realization for large plans.
    std::vector<Realization> synthesize_all(const ElementPatternSet &set, const SynthesisPlan &plan);

    using RealizationVisitor = std::function<void(std::size_t realization_id, const std::string &subarray,
                                                  std::size_t weight_index,
                                                  std::span<const PolarimetricSample> pattern)>;

    // Streams the realizations of synthesize_all in the same order through a
    // single reused buffer.
    void for_each_realization(const ElementPatternSet &set, const SynthesisPlan &plan,
                              const RealizationVisitor &visit);
}

#endif
