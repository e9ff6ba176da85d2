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

#include "synth.hpp"
#include "error.hpp"

#include "json.hpp"

#include <cmath>

namespace arraycov
{
    std::vector<double> WeightVector::phases_deg() const
    {
        std::vector<double> out;
        const double levels = double(1u << bits);
        for (unsigned s : steps)
            out.push_back(360.0 * double(s) / levels);
        return out;
    }

    double WeightVector::amplitude() const
    {
        return 1.0 / std::sqrt(double(steps.size()));
    }

    std::size_t weight_count(std::size_t elements, int bits)
    {
        if (bits < 1 || bits > 6)
            fail(ErrorKind::InvalidArgument, "phase-shifter bit depth must be in [1, 6]");
        if (elements == 0)
            fail(ErrorKind::InvalidArgument, "sub-array needs at least one feed");
        const std::size_t exponent = std::size_t(bits) * (elements - 1);
        if (exponent >= 24) // 2^24 > 1e7
            fail(ErrorKind::Capacity, "weight enumeration of 2^" + std::to_string(exponent) + " vectors exceeds the cap");
        const std::size_t count = std::size_t(1) << exponent;
        if (count > max_weight_vectors)
            fail(ErrorKind::Capacity, "weight enumeration of " + std::to_string(count) + " vectors exceeds the cap");
        return count;
    }

    std::vector<WeightVector> enumerate_weights(const SubArraySpec &spec, int bits)
    {
        const std::size_t n = spec.feed_indices.size();
        const std::size_t count = weight_count(n, bits);
        const unsigned levels = 1u << bits;
        std::vector<WeightVector> out;
        out.reserve(count);
        for (std::size_t k = 0; k < count; ++k)
        {
            WeightVector w{std::vector<unsigned>(n, 0u), bits};
            // last element varies fastest
            std::size_t rest = k;
            for (std::size_t i = n; i-- > 1;)
            {
                w.steps[i] = unsigned(rest % levels);
                rest /= levels;
            }
            out.push_back(std::move(w));
        }
        return out;
    }

    cplx lattice_phasor(unsigned step, int bits)
    {
        const unsigned levels = 1u << bits;
        step %= levels;
        if ((step * 4u) % levels == 0)
        {
            switch ((step * 4u) / levels)
            {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            case 2: return {-1.0, 0.0};
            default: return {0.0, -1.0};
            }
        }
        const double angle = 2.0 * pi * double(step) / double(levels);
        return std::polar(1.0, angle);
    }

    SynthesisPlan::SynthesisPlan(std::vector<SubArrayDefinition> subarrays, int bits)
        : subarrays_(std::move(subarrays)), bits_(bits)
    {
        if (subarrays_.empty())
            fail(ErrorKind::InvalidArgument, "synthesis plan has no sub-arrays");
        for (const auto &s : subarrays_)
        {
            for (std::size_t i = 0; i < s.feeds.size(); ++i)
                for (std::size_t j = 0; j < i; ++j)
                    if (s.feeds[i] == s.feeds[j])
                        fail(ErrorKind::InvalidArgument, "sub-array '" + s.label + "' lists feed '" + s.feeds[i] + "' twice");
            (void)weight_count(s.feeds.size(), bits_);
        }
    }

    std::size_t SynthesisPlan::realization_count() const
    {
        std::size_t total = 0;
        for (const auto &s : subarrays_)
            total += weight_count(s.feeds.size(), bits_);
        return total;
    }

    std::vector<SubArraySpec> SynthesisPlan::resolve(const ElementPatternSet &set) const
    {
        std::vector<SubArraySpec> out;
        for (const auto &s : subarrays_)
        {
            SubArraySpec spec{s.label, {}};
            for (const auto &f : s.feeds)
                spec.feed_indices.push_back(set.feed_index(f));
            out.push_back(std::move(spec));
        }
        return out;
    }

    SynthesisPlan SynthesisPlan::from_json_text(const std::string &text)
    {
        try
        {
            const auto j = nlohmann::json::parse(text);
            std::vector<SubArrayDefinition> subs;
            for (const auto &s : j.at("subarrays"))
                subs.push_back({s.at("label").get<std::string>(), s.at("feeds").get<std::vector<std::string>>()});
            return SynthesisPlan(std::move(subs), j.value("bits", 3));
        }
        catch (const nlohmann::json::exception &e)
        {
            fail(ErrorKind::Parse, std::string("synthesis plan: ") + e.what());
        }
    }

    std::string SynthesisPlan::to_json_text() const
    {
        nlohmann::ordered_json j;
        j["bits"] = bits_;
        j["subarrays"] = nlohmann::ordered_json::array();
        for (const auto &s : subarrays_)
            j["subarrays"].push_back({{"label", s.label}, {"feeds", s.feeds}});
        return j.dump(2);
    }

    void validate(const SubArraySpec &spec, const ElementPatternSet &set)
    {
        if (spec.feed_indices.empty())
            fail(ErrorKind::InvalidArgument, "sub-array '" + spec.label + "' has no feeds");
        for (std::size_t i = 0; i < spec.feed_indices.size(); ++i)
        {
            if (spec.feed_indices[i] >= set.feed_count())
                fail(ErrorKind::InvalidArgument, "sub-array '" + spec.label + "' feed index out of range");
            for (std::size_t j = 0; j < i; ++j)
                if (spec.feed_indices[i] == spec.feed_indices[j])
                    fail(ErrorKind::InvalidArgument, "sub-array '" + spec.label + "' repeats a feed");
        }
    }

    void synthesize_into(const ElementPatternSet &set, const SubArraySpec &spec, const WeightVector &w,
                         std::span<PolarimetricSample> out)
    {
        const std::size_t n = spec.feed_indices.size();
        if (w.steps.size() != n)
            fail(ErrorKind::InvalidArgument, "weight vector length does not match sub-array size");
        const std::size_t dirs = set.grid().size();
        if (out.size() != dirs)
            fail(ErrorKind::InvalidArgument, "output buffer does not match grid size");

        const double amp = w.amplitude();
        std::vector<cplx> coeff(n);
        for (std::size_t i = 0; i < n; ++i)
            coeff[i] = amp * lattice_phasor(w.steps[i], w.bits);

        for (std::size_t d = 0; d < dirs; ++d)
            out[d] = {};
        for (std::size_t i = 0; i < n; ++i)
        {
            const auto feed = set.feed_samples(spec.feed_indices[i]);
            const cplx c = coeff[i];
            for (std::size_t d = 0; d < dirs; ++d)
            {
                out[d].g_theta += c * feed[d].g_theta;
                out[d].g_phi += c * feed[d].g_phi;
            }
        }
    }

    std::vector<PolarimetricSample> synthesize(const ElementPatternSet &set, const SubArraySpec &spec,
                                               const WeightVector &w)
    {
        validate(spec, set);
        std::vector<PolarimetricSample> out(set.grid().size());
        synthesize_into(set, spec, w, out);
        return out;
    }

    void for_each_realization(const ElementPatternSet &set, const SynthesisPlan &plan,
                              const RealizationVisitor &visit)
    {
        const auto specs = plan.resolve(set);
        std::vector<PolarimetricSample> buffer(set.grid().size());
        std::size_t id = 0;
        for (const auto &spec : specs)
        {
            validate(spec, set);
            const auto weights = enumerate_weights(spec, plan.bits());
            for (std::size_t k = 0; k < weights.size(); ++k)
            {
                synthesize_into(set, spec, weights[k], buffer);
                visit(id++, spec.label, k, buffer);
            }
        }
    }

    std::vector<Realization> synthesize_all(const ElementPatternSet &set, const SynthesisPlan &plan)
    {
        std::vector<Realization> out;
        out.reserve(plan.realization_count());
        for_each_realization(set, plan, [&](std::size_t, const std::string &label, std::size_t k,
                                            std::span<const PolarimetricSample> pattern) {
            out.push_back({label, k, {pattern.begin(), pattern.end()}});
        });
        return out;
    }
}
