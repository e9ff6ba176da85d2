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

#ifndef ARRAYCOV_MATERIALS_HPP
#define ARRAYCOV_MATERIALS_HPP

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace arraycov
{
    inline constexpr double speed_of_light = 299792458.0;

    // Relative permittivity uses the eps' - j eps'' convention (e^{jwt} time
    // dependence), i.e. lossy media have a negative imaginary part.
    struct PermittivityPoint
    {
        double frequency_ghz;
        std::complex<double> eps;
    };

    // Tabulated complex permittivity, linear in frequency per component.
    // A single-point record is treated as non-dispersive.
    class MaterialRecord
    {
    public:
        MaterialRecord() = default;
        MaterialRecord(std::string name, std::vector<PermittivityPoint> points);

        static MaterialRecord constant(std::string name, std::complex<double> eps);

        const std::string &name() const { return name_; }
        const std::vector<PermittivityPoint> &points() const { return points_; }

        // Outside the tabulated range a range error is raised unless
        // extrapolation is requested.
        std::complex<double> permittivity_at(double frequency_ghz, bool extrapolate = false) const;

    private:
        std::string name_;
        std::vector<PermittivityPoint> points_;
    };

    // CSV: frequency_ghz,eps_real,eps_imag where eps_imag is the loss factor
    // eps'' >= 0. Lines starting with '#' are comments.
    MaterialRecord load_material_csv(const std::filesystem::path &path, std::string name = {});

    // 1/e field depth in mm; alpha = k0 |Im sqrt(eps)|.
    double penetration_depth_mm(std::complex<double> eps, double frequency_ghz);
    double penetration_depth_mm(const MaterialRecord &material, double frequency_ghz);

    enum class Polarization
    {
        TE,
        TM
    };

    struct Layer
    {
        MaterialRecord material;
        double thickness_mm;
    };

    // Layers ordered from the incident side inwards, bounded by two half-spaces.
    class LayerStack
    {
    public:
        LayerStack(std::vector<Layer> layers, MaterialRecord substrate,
                   MaterialRecord incident = MaterialRecord::constant("air", 1.0));

        const std::vector<Layer> &layers() const { return layers_; }
        const MaterialRecord &incident() const { return incident_; }
        const MaterialRecord &substrate() const { return substrate_; }

    private:
        std::vector<Layer> layers_;
        MaterialRecord incident_;
        MaterialRecord substrate_;
    };

    // Recursive slab reflection coefficient seen from the incident medium.
    std::complex<double> layered_reflection(const LayerStack &stack, double frequency_ghz, double incidence_deg,
                                            Polarization pol, bool extrapolate = false);

    // 20 log10 |Gamma_a| - 20 log10 |Gamma_b| at normal incidence.
    double skin_thickness_delta(const LayerStack &a, const LayerStack &b, double frequency_ghz);

    // {"materials": {name: "file.csv" | {"eps_real": x, "eps_imag": y}},
    //  "incident": name, "layers": [{"material": name, "thickness_mm": d}],
    //  "substrate": name}
    // "air" and "vacuum" are predefined; relative paths resolve against the
    // JSON file's directory.
    LayerStack load_stack_json(const std::filesystem::path &path);
    LayerStack parse_stack_json(const std::string &text, const std::filesystem::path &base_dir);
}

#endif
