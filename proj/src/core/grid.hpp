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

#ifndef ARRAYCOV_GRID_HPP
#define ARRAYCOV_GRID_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace arraycov
{
    inline constexpr double pi = 3.141592653589793238462643383279502884;
    inline constexpr double four_pi = 4.0 * pi;
    inline constexpr double deg2rad = pi / 180.0;

    // Tolerance in degrees used when matching directions against a grid.
    inline constexpr double angle_tolerance_deg = 1e-9;

    struct Direction
    {
        double theta_deg = 0.0; // polar angle, 0 = +z
        double phi_deg = 0.0;   // azimuth in [0, 360)
    };

    bool is_pole(double theta_deg);

    // Direction equality with pole degeneracy: (0, any) == (0, any).
    bool same_direction(const Direction &a, const Direction &b,
                        double tol_deg = angle_tolerance_deg);

    // Great-circle angle between two directions, degrees.
    double angular_distance_deg(const Direction &a, const Direction &b);

    enum class GridKind
    {
        Regular,      // constant theta step, constant phi step on every ring
        UniformSphere // rings whose azimuth count follows sin(theta)
    };

    // A constant-theta ring of samples, evenly spaced in phi.
    struct Ring
    {
        double theta_deg;
        std::size_t first; // index of the first direction of this ring
        std::size_t count;
    };

    // Input for building a grid from raw ring samples (e.g. while parsing a file).
    struct RingSamples
    {
        double theta_deg;
        std::vector<double> phi_deg; // ascending
    };

    // Immutable ring-ordered set of directions with solid-angle weights.
    // Directions are stored ring by ring in ascending theta, ascending phi
    // within a ring; poles are stored once.
    class SphericalGrid
    {
    public:
        SphericalGrid() = default;

        static SphericalGrid regular(double theta_step_deg, double phi_step_deg);
        static SphericalGrid uniform_sphere(int target_count);

        // Validates ring structure and assigns analytic band weights. The
        // grid is classified regular when all theta steps are equal, both
        // poles are present and every other ring has the same phi lattice
        // starting at 0.
        static SphericalGrid from_rings(std::vector<RingSamples> rings);

        std::size_t size() const { return directions_.size(); }
        bool empty() const { return directions_.empty(); }
        const Direction &direction(std::size_t i) const { return directions_[i]; }
        std::span<const Direction> directions() const { return directions_; }
        std::span<const double> weights() const { return weights_; }
        std::span<const Ring> rings() const { return rings_; }
        GridKind kind() const { return kind_; }

        // Only meaningful for regular grids.
        double theta_step() const { return theta_step_; }
        double phi_step() const { return phi_step_; }

        double weight_sum() const;

        // Both poles present and weights close the sphere within 0.1 %.
        bool is_full_sphere() const;

        std::optional<std::size_t> find(const Direction &d) const;

        // Same directions in the same order.
        bool same_directions(const SphericalGrid &other) const;

        // Replaces weights (e.g. from a grid file); all must be positive.
        SphericalGrid with_weights(std::vector<double> weights) const;

    private:
        GridKind kind_ = GridKind::Regular;
        std::vector<Direction> directions_;
        std::vector<double> weights_;
        std::vector<Ring> rings_;
        double theta_step_ = 0.0;
        double phi_step_ = 0.0;
    };

    std::vector<double> solid_angle_weights(const SphericalGrid &grid);

    // Grid CSV: theta_deg,phi_deg,weight_sr
    void save_grid_csv(const SphericalGrid &grid, const std::filesystem::path &path);
    SphericalGrid load_grid_csv(const std::filesystem::path &path);

    // Groups (theta, phi) pairs into rings. Poles collapse to a single
    // sample. Returns for every input pair the index it maps to in the grid
    // built from the returned rings, or throws a parse error naming the row
    // of the first offending pair. Rows are numbered from 1 unless explicit
    // row numbers are given.
    struct RingGrouping
    {
        std::vector<RingSamples> rings;
        std::vector<std::size_t> index_of_row; // canonical index per row, SIZE_MAX for duplicate pole rows
    };
    RingGrouping group_into_rings(std::span<const Direction> rows,
                                  std::span<const std::size_t> row_numbers = {});
}

#endif
