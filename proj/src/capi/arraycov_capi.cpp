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

#include "arraycov/arraycov.h"

#include "coverage.hpp"
#include "deembed.hpp"
#include "error.hpp"
#include "materials.hpp"
#include "pattern.hpp"
#include "synth.hpp"
#include "text.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <memory>
#include <new>
#include <string>

using namespace arraycov;

struct ac_grid { SphericalGrid value; };
struct ac_patterns { ElementPatternSet value; };
struct ac_loss_table { PortLossTable value; };
struct ac_plan
{
    std::vector<SubArrayDefinition> subarrays;
    int bits = 3;

    SynthesisPlan build() const { return SynthesisPlan(subarrays, bits); }
};
struct ac_gain_map { GainMap value; };
struct ac_coverage { CoverageResult value; };
struct ac_material { MaterialRecord value; };
struct ac_stack { LayerStack value; };

namespace
{
    thread_local std::string last_error;

    ac_status to_status(ErrorKind kind)
    {
        switch (kind)
        {
        case ErrorKind::InvalidArgument: return AC_ERR_INVALID_ARGUMENT;
        case ErrorKind::Parse: return AC_ERR_PARSE;
        case ErrorKind::Lookup: return AC_ERR_LOOKUP;
        case ErrorKind::Unsupported: return AC_ERR_UNSUPPORTED;
        case ErrorKind::Capacity: return AC_ERR_CAPACITY;
        case ErrorKind::Range: return AC_ERR_RANGE;
        case ErrorKind::Estimation: return AC_ERR_ESTIMATION;
        case ErrorKind::UndefinedDepth: return AC_ERR_UNDEFINED_DEPTH;
        case ErrorKind::Io: return AC_ERR_IO;
        case ErrorKind::Config: return AC_ERR_CONFIG;
        }
        return AC_ERR_INTERNAL;
    }

    template <class F>
    ac_status guarded(F &&body)
    {
        try
        {
            body();
            return AC_OK;
        }
        catch (const Error &e)
        {
            last_error = e.what();
            return to_status(e.kind());
        }
        catch (const std::bad_alloc &)
        {
            last_error = "out of memory";
            return AC_ERR_CAPACITY;
        }
        catch (const std::exception &e)
        {
            last_error = e.what();
            return AC_ERR_INTERNAL;
        }
        catch (...)
        {
            last_error = "unknown failure";
            return AC_ERR_INTERNAL;
        }
    }

    template <class... P>
    void require(const P *...ptrs)
    {
        if (((ptrs == nullptr) || ...))
            fail(ErrorKind::InvalidArgument, "null argument");
    }
}

extern "C" {

const char *ac_version(void) { return ARRAYCOV_VERSION; }

const char *ac_status_name(ac_status status)
{
    switch (status)
    {
    case AC_OK: return "ok";
    case AC_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case AC_ERR_PARSE: return "parse error";
    case AC_ERR_LOOKUP: return "lookup error";
    case AC_ERR_UNSUPPORTED: return "unsupported-operation";
    case AC_ERR_CAPACITY: return "capacity error";
    case AC_ERR_RANGE: return "range error";
    case AC_ERR_ESTIMATION: return "estimation error";
    case AC_ERR_UNDEFINED_DEPTH: return "undefined-depth error";
    case AC_ERR_IO: return "i/o error";
    case AC_ERR_CONFIG: return "configuration error";
    case AC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char *ac_last_error(void) { return last_error.c_str(); }

// grids

ac_status ac_grid_regular(double theta_step_deg, double phi_step_deg, ac_grid **out)
{
    return guarded([&] {
        require(out);
        *out = new ac_grid{SphericalGrid::regular(theta_step_deg, phi_step_deg)};
    });
}

ac_status ac_grid_uniform(int target_count, ac_grid **out)
{
    return guarded([&] {
        require(out);
        *out = new ac_grid{SphericalGrid::uniform_sphere(target_count)};
    });
}

ac_status ac_grid_load_csv(const char *path, ac_grid **out)
{
    return guarded([&] {
        require(path, out);
        *out = new ac_grid{load_grid_csv(path)};
    });
}

ac_status ac_grid_save_csv(const ac_grid *grid, const char *path)
{
    return guarded([&] {
        require(grid, path);
        save_grid_csv(grid->value, path);
    });
}

size_t ac_grid_size(const ac_grid *grid) { return grid ? grid->value.size() : 0; }

ac_grid_kind ac_grid_get_kind(const ac_grid *grid)
{
    return grid && grid->value.kind() == GridKind::UniformSphere ? AC_GRID_UNIFORM_SPHERE : AC_GRID_REGULAR;
}

double ac_grid_weight_sum(const ac_grid *grid) { return grid ? grid->value.weight_sum() : 0.0; }

ac_status ac_grid_direction(const ac_grid *grid, size_t index, double *theta_deg, double *phi_deg, double *weight_sr)
{
    return guarded([&] {
        require(grid);
        if (index >= grid->value.size())
            fail(ErrorKind::InvalidArgument, "direction index out of range");
        const auto &d = grid->value.direction(index);
        if (theta_deg)
            *theta_deg = d.theta_deg;
        if (phi_deg)
            *phi_deg = d.phi_deg;
        if (weight_sr)
            *weight_sr = grid->value.weights()[index];
    });
}

void ac_grid_free(ac_grid *grid) { delete grid; }

// patterns

ac_status ac_patterns_create(const ac_grid *grid, size_t feed_count, const char *const *labels,
                             const double *samples, double frequency_ghz, ac_patterns **out)
{
    return guarded([&] {
        require(grid, labels, samples, out);
        std::vector<std::string> feeds;
        for (size_t f = 0; f < feed_count; ++f)
        {
            require(labels[f]);
            feeds.emplace_back(labels[f]);
        }
        const size_t n = grid->value.size() * feed_count;
        std::vector<PolarimetricSample> s(n);
        for (size_t i = 0; i < n; ++i)
            s[i] = {{samples[4 * i], samples[4 * i + 1]}, {samples[4 * i + 2], samples[4 * i + 3]}};
        PatternMetadata meta;
        meta.frequency_ghz = frequency_ghz;
        *out = new ac_patterns{ElementPatternSet(grid->value, std::move(feeds), std::move(s), meta)};
    });
}

ac_status ac_patterns_load_csv(const char *path, ac_patterns **out)
{
    return guarded([&] {
        require(path, out);
        *out = new ac_patterns{load_pattern_csv(path)};
    });
}

ac_status ac_patterns_save_csv(const ac_patterns *patterns, const char *path)
{
    return guarded([&] {
        require(patterns, path);
        save_pattern_csv(patterns->value, path);
    });
}

ac_status ac_patterns_resample(const ac_patterns *patterns, const ac_grid *target, ac_patterns **out)
{
    return guarded([&] {
        require(patterns, target, out);
        *out = new ac_patterns{resample(patterns->value, target->value)};
    });
}

size_t ac_patterns_feed_count(const ac_patterns *patterns) { return patterns ? patterns->value.feed_count() : 0; }

const char *ac_patterns_feed_label(const ac_patterns *patterns, size_t index)
{
    if (!patterns || index >= patterns->value.feed_count())
        return nullptr;
    return patterns->value.feeds()[index].c_str();
}

double ac_patterns_frequency_ghz(const ac_patterns *patterns)
{
    return patterns ? patterns->value.metadata().frequency_ghz : std::numeric_limits<double>::quiet_NaN();
}

ac_status ac_patterns_grid(const ac_patterns *patterns, ac_grid **out)
{
    return guarded([&] {
        require(patterns, out);
        *out = new ac_grid{patterns->value.grid()};
    });
}

ac_status ac_patterns_power_gain_db(const ac_patterns *patterns, const char *feed, double theta_deg, double phi_deg,
                                    double *out_db)
{
    return guarded([&] {
        require(patterns, feed, out_db);
        *out_db = power_gain_db(patterns->value, feed, {theta_deg, phi_deg});
    });
}

void ac_patterns_free(ac_patterns *patterns) { delete patterns; }

// de-embedding

ac_status ac_deembed_estimate(const ac_patterns *simulated, const ac_patterns *measured,
                              const ac_beam_window *windows, size_t window_count, double floor_db,
                              ac_loss_averaging averaging, ac_loss_table **out)
{
    return guarded([&] {
        require(simulated, measured, out);
        if (window_count > 0)
            require(windows);
        std::map<std::string, BeamWindow> map;
        for (size_t i = 0; i < window_count; ++i)
        {
            require(windows[i].feed);
            map[windows[i].feed] = {{windows[i].theta_deg, windows[i].phi_deg}, windows[i].half_width_deg};
        }
        DeembedOptions opt;
        opt.floor_db = floor_db;
        opt.averaging = averaging == AC_LOSS_LINEAR_RATIO ? LossAveraging::LinearPowerRatio : LossAveraging::DecibelMean;
        *out = new ac_loss_table{estimate_losses(simulated->value, measured->value, map, opt)};
    });
}

ac_status ac_deembed_apply(const ac_patterns *measured, const ac_loss_table *table, ac_patterns **out)
{
    return guarded([&] {
        require(measured, table, out);
        *out = new ac_patterns{apply_losses(measured->value, table->value)};
    });
}

ac_status ac_loss_table_load_csv(const char *path, ac_loss_table **out)
{
    return guarded([&] {
        require(path, out);
        *out = new ac_loss_table{load_loss_table_csv(path)};
    });
}

ac_status ac_loss_table_save_csv(const ac_loss_table *table, const char *path)
{
    return guarded([&] {
        require(table, path);
        save_loss_table_csv(table->value, path);
    });
}

size_t ac_loss_table_size(const ac_loss_table *table) { return table ? table->value.size() : 0; }

ac_status ac_loss_table_entry(const ac_loss_table *table, size_t index, const char **feed, double *loss_db,
                              double *half_width_deg)
{
    return guarded([&] {
        require(table);
        if (index >= table->value.size())
            fail(ErrorKind::InvalidArgument, "loss table index out of range");
        const auto &e = table->value.entries()[index];
        if (feed)
            *feed = e.feed.c_str();
        if (loss_db)
            *loss_db = e.loss_db;
        if (half_width_deg)
            *half_width_deg = e.window_half_width_deg;
    });
}

void ac_loss_table_free(ac_loss_table *table) { delete table; }

// synthesis

ac_status ac_plan_create(int bits, ac_plan **out)
{
    return guarded([&] {
        require(out);
        (void)weight_count(1, bits);
        *out = new ac_plan{{}, bits};
    });
}

ac_status ac_plan_from_json(const char *json_text, ac_plan **out)
{
    return guarded([&] {
        require(json_text, out);
        const auto plan = SynthesisPlan::from_json_text(json_text);
        *out = new ac_plan{plan.subarrays(), plan.bits()};
    });
}

ac_status ac_plan_add_subarray(ac_plan *plan, const char *label, const char *const *feeds, size_t feed_count)
{
    return guarded([&] {
        require(plan, label);
        if (feed_count > 0)
            require(feeds);
        SubArrayDefinition def{label, {}};
        for (size_t i = 0; i < feed_count; ++i)
        {
            require(feeds[i]);
            def.feeds.emplace_back(feeds[i]);
        }
        auto next = plan->subarrays;
        next.push_back(std::move(def));
        (void)SynthesisPlan(next, plan->bits);
        plan->subarrays = std::move(next);
    });
}

ac_status ac_plan_set_bits(ac_plan *plan, int bits)
{
    return guarded([&] {
        require(plan);
        if (!plan->subarrays.empty())
            (void)SynthesisPlan(plan->subarrays, bits);
        else
            (void)weight_count(1, bits);
        plan->bits = bits;
    });
}

int ac_plan_bits(const ac_plan *plan) { return plan ? plan->bits : 0; }

size_t ac_plan_subarray_count(const ac_plan *plan) { return plan ? plan->subarrays.size() : 0; }

ac_status ac_plan_realization_count(const ac_plan *plan, size_t *out)
{
    return guarded([&] {
        require(plan, out);
        *out = plan->build().realization_count();
    });
}

void ac_plan_free(ac_plan *plan) { delete plan; }

ac_status ac_weight_count(size_t elements, int bits, size_t *out)
{
    return guarded([&] {
        require(out);
        *out = weight_count(elements, bits);
    });
}

ac_status ac_synth_dump_csv(const ac_patterns *patterns, const ac_plan *plan, const char *path)
{
    return guarded([&] {
        require(patterns, plan, path);
        std::string out = "realization_id,";
        out += pattern_csv_columns;
        out += '\n';
        for_each_realization(patterns->value, plan->build(),
                             [&](std::size_t id, const std::string &, std::size_t,
                                 std::span<const PolarimetricSample> pattern) {
                                 append_pattern_rows(out, std::to_string(id), patterns->value.grid(), pattern);
                             });
        text::write_file(path, out);
    });
}

// coverage

ac_status ac_max_realized_gain(const ac_patterns *patterns, const ac_plan *plan, unsigned threads, ac_gain_map **out)
{
    return guarded([&] {
        require(patterns, plan, out);
        *out = new ac_gain_map{max_realized_gain(patterns->value, plan->build(), threads)};
    });
}

ac_status ac_element_gain_map(const ac_patterns *patterns, const char *feed, ac_gain_map **out)
{
    return guarded([&] {
        require(patterns, feed, out);
        *out = new ac_gain_map{element_gain_map(patterns->value, patterns->value.feed_index(feed))};
    });
}

ac_status ac_gain_map_load_csv(const char *path, ac_gain_map **out)
{
    return guarded([&] {
        require(path, out);
        *out = new ac_gain_map{load_gain_map_csv(path)};
    });
}

ac_status ac_gain_map_save_csv(const ac_gain_map *map, const char *path)
{
    return guarded([&] {
        require(map, path);
        save_gain_map_csv(map->value, path);
    });
}

size_t ac_gain_map_size(const ac_gain_map *map) { return map ? map->value.gain().size() : 0; }

ac_status ac_gain_map_value(const ac_gain_map *map, size_t index, double *gain_db, int64_t *argmax)
{
    return guarded([&] {
        require(map);
        if (index >= map->value.gain().size())
            fail(ErrorKind::InvalidArgument, "gain map index out of range");
        if (gain_db)
            *gain_db = map->value.gain_db(index);
        if (argmax)
            *argmax = map->value.argmax().empty() ? -1 : map->value.argmax()[index];
    });
}

ac_status ac_gain_map_write_azimuth_svg(const ac_gain_map *map, const char *title, const char *path)
{
    return guarded([&] {
        require(map, title, path);
        text::write_file(path, azimuth_cut_svg(map->value, title));
    });
}

ac_status ac_mae_per_theta_cut(const ac_gain_map *a, const ac_gain_map *b, double floor_db, double *theta_deg,
                               double *mae_db, size_t capacity, size_t *count)
{
    return guarded([&] {
        require(a, b, count);
        const auto cuts = mae_per_theta_cut(a->value, b->value, floor_db);
        *count = cuts.size();
        if (!theta_deg && !mae_db)
            return;
        if (capacity < cuts.size())
            fail(ErrorKind::Capacity, "output buffers hold " + std::to_string(capacity) + " of " +
                                          std::to_string(cuts.size()) + " rings");
        for (size_t i = 0; i < cuts.size(); ++i)
        {
            if (theta_deg)
                theta_deg[i] = cuts[i].theta_deg;
            if (mae_db)
                mae_db[i] = cuts[i].mae_db;
        }
    });
}

void ac_gain_map_free(ac_gain_map *map) { delete map; }

ac_status ac_coverage_cdf(const ac_gain_map *map, ac_cdf_weighting weighting, ac_coverage **out)
{
    return guarded([&] {
        require(map, out);
        *out = new ac_coverage{coverage_cdf(map->value, weighting == AC_CDF_SAMPLE_COUNT ? CdfWeighting::SampleCount
                                                                                         : CdfWeighting::SolidAngle)};
    });
}

ac_status ac_coverage_cdf_at(const ac_coverage *coverage, double x_db, double *out)
{
    return guarded([&] {
        require(coverage, out);
        *out = coverage->value.cdf(x_db);
    });
}

ac_status ac_coverage_percentile(const ac_coverage *coverage, double p, double *out_db)
{
    return guarded([&] {
        require(coverage, out_db);
        *out_db = percentile_gain(coverage->value, p);
    });
}

ac_status ac_coverage_peak_db(const ac_coverage *coverage, double *out_db)
{
    return guarded([&] {
        require(coverage, out_db);
        *out_db = coverage->value.sorted_gain_db().back();
    });
}

ac_status ac_coverage_compare(const ac_coverage *x, const ac_coverage *y, const double *levels, size_t level_count,
                              double *deltas_db)
{
    return guarded([&] {
        require(x, y);
        if (level_count > 0)
            require(levels, deltas_db);
        const auto d = compare_cdfs(x->value, y->value, std::span(levels, level_count));
        std::copy(d.begin(), d.end(), deltas_db);
    });
}

ac_status ac_coverage_save_csv(const ac_coverage *coverage, const char *path)
{
    return guarded([&] {
        require(coverage, path);
        save_cdf_csv(coverage->value, path);
    });
}

ac_status ac_coverage_write_svg(const ac_coverage *const *series, const char *const *names, size_t series_count,
                                const char *title, const char *path)
{
    return guarded([&] {
        require(series, names, title, path);
        std::vector<CdfSeries> s;
        for (size_t i = 0; i < series_count; ++i)
        {
            require(series[i], names[i]);
            s.push_back({names[i], &series[i]->value});
        }
        text::write_file(path, cdf_svg(s, title));
    });
}

void ac_coverage_free(ac_coverage *coverage) { delete coverage; }

// materials

ac_status ac_material_load_csv(const char *path, ac_material **out)
{
    return guarded([&] {
        require(path, out);
        *out = new ac_material{load_material_csv(path)};
    });
}

ac_status ac_material_permittivity(const ac_material *material, double frequency_ghz, int extrapolate,
                                   double *eps_real, double *eps_loss)
{
    return guarded([&] {
        require(material, eps_real, eps_loss);
        const auto eps = material->value.permittivity_at(frequency_ghz, extrapolate != 0);
        *eps_real = eps.real();
        *eps_loss = -eps.imag();
    });
}

ac_status ac_material_penetration_depth_mm(const ac_material *material, double frequency_ghz, double *out_mm)
{
    return guarded([&] {
        require(material, out_mm);
        *out_mm = penetration_depth_mm(material->value, frequency_ghz);
    });
}

void ac_material_free(ac_material *material) { delete material; }

ac_status ac_stack_load_json(const char *path, ac_stack **out)
{
    return guarded([&] {
        require(path, out);
        *out = new ac_stack{load_stack_json(path)};
    });
}

ac_status ac_stack_parse_json(const char *json_text, const char *base_dir, ac_stack **out)
{
    return guarded([&] {
        require(json_text, out);
        *out = new ac_stack{parse_stack_json(json_text, base_dir ? base_dir : ".")};
    });
}

ac_status ac_stack_reflection(const ac_stack *stack, double frequency_ghz, double incidence_deg,
                              ac_polarization polarization, double *gamma_re, double *gamma_im)
{
    return guarded([&] {
        require(stack, gamma_re, gamma_im);
        const auto g = layered_reflection(stack->value, frequency_ghz, incidence_deg,
                                          polarization == AC_POL_TM ? Polarization::TM : Polarization::TE);
        *gamma_re = g.real();
        *gamma_im = g.imag();
    });
}

ac_status ac_stack_delta_db(const ac_stack *a, const ac_stack *b, double frequency_ghz, double *out_db)
{
    return guarded([&] {
        require(a, b, out_db);
        *out_db = skin_thickness_delta(a->value, b->value, frequency_ghz);
    });
}

void ac_stack_free(ac_stack *stack) { delete stack; }

} // extern "C"
