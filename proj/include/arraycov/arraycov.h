/* SPDX-License-Identifier: Apache-2.0
 *
 * arraycov - array pattern synthesis and spherical coverage evaluation
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------
 *
 * C interface of the arraycov shared library.
 *
 * Every object is an opaque handle created by an ac_*_create / ac_*_load /
 * computing function and released with the matching ac_*_free. Functions
 * that can fail return an ac_status; on failure ac_last_error() returns a
 * message for the calling thread that stays valid until the next failing
 * call on that thread. Output handles are only written on AC_OK.
 *
 * Units: angles in degrees, frequencies in GHz, thicknesses in mm, solid
 * angles in steradians, gains in dB unless a name says otherwise. Pattern
 * samples are linear complex field gains (sqrt of realized gain).
 */

#ifndef ARRAYCOV_H
#define ARRAYCOV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(ARRAYCOV_BUILDING)
#    define ARRAYCOV_API __declspec(dllexport)
#  else
#    define ARRAYCOV_API __declspec(dllimport)
#  endif
#else
#  define ARRAYCOV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ac_status
{
    AC_OK = 0,
    AC_ERR_INVALID_ARGUMENT = 1,
    AC_ERR_PARSE = 2,
    AC_ERR_LOOKUP = 3,
    AC_ERR_UNSUPPORTED = 4,
    AC_ERR_CAPACITY = 5,
    AC_ERR_RANGE = 6,
    AC_ERR_ESTIMATION = 7,
    AC_ERR_UNDEFINED_DEPTH = 8,
    AC_ERR_IO = 9,
    AC_ERR_CONFIG = 10,
    AC_ERR_INTERNAL = 99
} ac_status;

ARRAYCOV_API const char *ac_version(void);
ARRAYCOV_API const char *ac_status_name(ac_status status);
ARRAYCOV_API const char *ac_last_error(void);

/* ---- grids ------------------------------------------------------------ */

typedef struct ac_grid ac_grid;

typedef enum ac_grid_kind
{
    AC_GRID_REGULAR = 0,
    AC_GRID_UNIFORM_SPHERE = 1
} ac_grid_kind;

/* Rings at theta = 0, step, ..., 180 with 360/phi_step samples each (poles once). */
ARRAYCOV_API ac_status ac_grid_regular(double theta_step_deg, double phi_step_deg, ac_grid **out);
/* Ring grid with azimuth counts proportional to sin(theta), about target_count directions. */
ARRAYCOV_API ac_status ac_grid_uniform(int target_count, ac_grid **out);
ARRAYCOV_API ac_status ac_grid_load_csv(const char *path, ac_grid **out);
ARRAYCOV_API ac_status ac_grid_save_csv(const ac_grid *grid, const char *path);
ARRAYCOV_API size_t ac_grid_size(const ac_grid *grid);
ARRAYCOV_API ac_grid_kind ac_grid_get_kind(const ac_grid *grid);
ARRAYCOV_API double ac_grid_weight_sum(const ac_grid *grid);
ARRAYCOV_API ac_status ac_grid_direction(const ac_grid *grid, size_t index, double *theta_deg, double *phi_deg,
                                         double *weight_sr);
ARRAYCOV_API void ac_grid_free(ac_grid *grid);

/* ---- element patterns ------------------------------------------------- */

typedef struct ac_patterns ac_patterns;

/* samples: feed-major, 4 doubles per direction (re/im g_theta, re/im g_phi). */
ARRAYCOV_API ac_status ac_patterns_create(const ac_grid *grid, size_t feed_count, const char *const *labels,
                                          const double *samples, double frequency_ghz, ac_patterns **out);
/* Reads the pattern CSV and its .json sidecar, if present. */
ARRAYCOV_API ac_status ac_patterns_load_csv(const char *path, ac_patterns **out);
/* Writes the pattern CSV and its .json sidecar. */
ARRAYCOV_API ac_status ac_patterns_save_csv(const ac_patterns *patterns, const char *path);
ARRAYCOV_API ac_status ac_patterns_resample(const ac_patterns *patterns, const ac_grid *target, ac_patterns **out);
ARRAYCOV_API size_t ac_patterns_feed_count(const ac_patterns *patterns);
/* NULL when index is out of range. Owned by the handle. */
ARRAYCOV_API const char *ac_patterns_feed_label(const ac_patterns *patterns, size_t index);
ARRAYCOV_API double ac_patterns_frequency_ghz(const ac_patterns *patterns);
/* Returns a copy of the sampling grid. */
ARRAYCOV_API ac_status ac_patterns_grid(const ac_patterns *patterns, ac_grid **out);
/* -INFINITY for an exact zero field. */
ARRAYCOV_API ac_status ac_patterns_power_gain_db(const ac_patterns *patterns, const char *feed, double theta_deg,
                                                 double phi_deg, double *out_db);
ARRAYCOV_API void ac_patterns_free(ac_patterns *patterns);

/* ---- de-embedding ----------------------------------------------------- */

typedef struct ac_loss_table ac_loss_table;

typedef struct ac_beam_window
{
    const char *feed;
    double theta_deg; /* boresight */
    double phi_deg;
    double half_width_deg;
} ac_beam_window;

typedef enum ac_loss_averaging
{
    AC_LOSS_DB_MEAN = 0,
    AC_LOSS_LINEAR_RATIO = 1
} ac_loss_averaging;

ARRAYCOV_API ac_status ac_deembed_estimate(const ac_patterns *simulated, const ac_patterns *measured,
                                           const ac_beam_window *windows, size_t window_count, double floor_db,
                                           ac_loss_averaging averaging, ac_loss_table **out);
ARRAYCOV_API ac_status ac_deembed_apply(const ac_patterns *measured, const ac_loss_table *table,
                                        ac_patterns **out);
ARRAYCOV_API ac_status ac_loss_table_load_csv(const char *path, ac_loss_table **out);
ARRAYCOV_API ac_status ac_loss_table_save_csv(const ac_loss_table *table, const char *path);
ARRAYCOV_API size_t ac_loss_table_size(const ac_loss_table *table);
ARRAYCOV_API ac_status ac_loss_table_entry(const ac_loss_table *table, size_t index, const char **feed,
                                           double *loss_db, double *half_width_deg);
ARRAYCOV_API void ac_loss_table_free(ac_loss_table *table);

/* ---- synthesis -------------------------------------------------------- */

typedef struct ac_plan ac_plan;

ARRAYCOV_API ac_status ac_plan_create(int bits, ac_plan **out);
ARRAYCOV_API ac_status ac_plan_from_json(const char *json_text, ac_plan **out);
ARRAYCOV_API ac_status ac_plan_add_subarray(ac_plan *plan, const char *label, const char *const *feeds,
                                            size_t feed_count);
ARRAYCOV_API ac_status ac_plan_set_bits(ac_plan *plan, int bits);
ARRAYCOV_API int ac_plan_bits(const ac_plan *plan);
ARRAYCOV_API size_t ac_plan_subarray_count(const ac_plan *plan);
ARRAYCOV_API ac_status ac_plan_realization_count(const ac_plan *plan, size_t *out);
ARRAYCOV_API void ac_plan_free(ac_plan *plan);

/* 2^(bits * (elements - 1)) with the library's capacity cap applied. */
ARRAYCOV_API ac_status ac_weight_count(size_t elements, int bits, size_t *out);

/* Writes every realization as pattern CSV rows keyed by realization_id. */
ARRAYCOV_API ac_status ac_synth_dump_csv(const ac_patterns *patterns, const ac_plan *plan, const char *path);

/* ---- coverage --------------------------------------------------------- */

typedef struct ac_gain_map ac_gain_map;
typedef struct ac_coverage ac_coverage;

typedef enum ac_cdf_weighting
{
    AC_CDF_SOLID_ANGLE = 0,
    AC_CDF_SAMPLE_COUNT = 1
} ac_cdf_weighting;

/* threads == 0 uses the hardware concurrency; results do not depend on it. */
ARRAYCOV_API ac_status ac_max_realized_gain(const ac_patterns *patterns, const ac_plan *plan, unsigned threads,
                                            ac_gain_map **out);
ARRAYCOV_API ac_status ac_element_gain_map(const ac_patterns *patterns, const char *feed, ac_gain_map **out);
ARRAYCOV_API ac_status ac_gain_map_load_csv(const char *path, ac_gain_map **out);
ARRAYCOV_API ac_status ac_gain_map_save_csv(const ac_gain_map *map, const char *path);
ARRAYCOV_API size_t ac_gain_map_size(const ac_gain_map *map);
/* argmax is -1 when the producing realization is unknown; either pointer may be NULL. */
ARRAYCOV_API ac_status ac_gain_map_value(const ac_gain_map *map, size_t index, double *gain_db, int64_t *argmax);
ARRAYCOV_API ac_status ac_gain_map_write_azimuth_svg(const ac_gain_map *map, const char *title, const char *path);
/* Call with theta/mae NULL to query the ring count in *count. */
ARRAYCOV_API ac_status ac_mae_per_theta_cut(const ac_gain_map *a, const ac_gain_map *b, double floor_db,
                                            double *theta_deg, double *mae_db, size_t capacity, size_t *count);
ARRAYCOV_API void ac_gain_map_free(ac_gain_map *map);

ARRAYCOV_API ac_status ac_coverage_cdf(const ac_gain_map *map, ac_cdf_weighting weighting, ac_coverage **out);
/* prob(G < x_db) */
ARRAYCOV_API ac_status ac_coverage_cdf_at(const ac_coverage *coverage, double x_db, double *out);
ARRAYCOV_API ac_status ac_coverage_percentile(const ac_coverage *coverage, double p, double *out_db);
ARRAYCOV_API ac_status ac_coverage_peak_db(const ac_coverage *coverage, double *out_db);
ARRAYCOV_API ac_status ac_coverage_compare(const ac_coverage *x, const ac_coverage *y, const double *levels,
                                           size_t level_count, double *deltas_db);
ARRAYCOV_API ac_status ac_coverage_save_csv(const ac_coverage *coverage, const char *path);
ARRAYCOV_API ac_status ac_coverage_write_svg(const ac_coverage *const *series, const char *const *names,
                                             size_t series_count, const char *title, const char *path);
ARRAYCOV_API void ac_coverage_free(ac_coverage *coverage);

/* ---- materials and layered reflection --------------------------------- */

typedef struct ac_material ac_material;
typedef struct ac_stack ac_stack;

typedef enum ac_polarization
{
    AC_POL_TE = 0,
    AC_POL_TM = 1
} ac_polarization;

ARRAYCOV_API ac_status ac_material_load_csv(const char *path, ac_material **out);
/* eps = eps_real - j eps_loss */
ARRAYCOV_API ac_status ac_material_permittivity(const ac_material *material, double frequency_ghz, int extrapolate,
                                                double *eps_real, double *eps_loss);
ARRAYCOV_API ac_status ac_material_penetration_depth_mm(const ac_material *material, double frequency_ghz,
                                                        double *out_mm);
ARRAYCOV_API void ac_material_free(ac_material *material);

ARRAYCOV_API ac_status ac_stack_load_json(const char *path, ac_stack **out);
ARRAYCOV_API ac_status ac_stack_parse_json(const char *json_text, const char *base_dir, ac_stack **out);
ARRAYCOV_API ac_status ac_stack_reflection(const ac_stack *stack, double frequency_ghz, double incidence_deg,
                                           ac_polarization polarization, double *gamma_re, double *gamma_im);
/* 20log10|G_a| - 20log10|G_b| at normal incidence. */
ARRAYCOV_API ac_status ac_stack_delta_db(const ac_stack *a, const ac_stack *b, double frequency_ghz,
                                         double *out_db);
ARRAYCOV_API void ac_stack_free(ac_stack *stack);

#ifdef __cplusplus
}
#endif

#endif
