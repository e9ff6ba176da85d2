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

#include "materials.hpp"
#include "error.hpp"
#include "text.hpp"

#include "json.hpp"

#include <cmath>
#include <map>

namespace arraycov
{
    using cplx = std::complex<double>;

    namespace
    {
        constexpr double two_pi = 6.283185307179586476925286766559;

        double wavenumber(double frequency_ghz)
        {
            return two_pi * frequency_ghz * 1e9 / speed_of_light;
        }

        // Longitudinal wavenumber with the decaying branch (Im <= 0).
        cplx kz(cplx eps, double sin2, double k0)
        {
            cplx root = std::sqrt(eps - sin2);
            if (root.imag() > 0.0)
                root = -root;
            return k0 * root;
        }
    }

    MaterialRecord::MaterialRecord(std::string name, std::vector<PermittivityPoint> points)
        : name_(std::move(name)), points_(std::move(points))
    {
        if (points_.empty())
            fail(ErrorKind::InvalidArgument, "material '" + name_ + "' has no permittivity data");
        for (std::size_t i = 0; i < points_.size(); ++i)
        {
            const auto &p = points_[i];
            if (!std::isfinite(p.frequency_ghz) || !std::isfinite(p.eps.real()) || !std::isfinite(p.eps.imag()))
                fail(ErrorKind::InvalidArgument, "material '" + name_ + "': non-finite data");
            if (p.eps.real() < 1.0)
                fail(ErrorKind::InvalidArgument, "material '" + name_ + "': eps' must be >= 1");
            if (p.eps.imag() > 0.0)
                fail(ErrorKind::InvalidArgument, "material '" + name_ + "': loss factor must be >= 0");
            if (i > 0 && !(p.frequency_ghz > points_[i - 1].frequency_ghz))
                fail(ErrorKind::InvalidArgument, "material '" + name_ + "': frequencies must be strictly increasing");
        }
    }

    MaterialRecord MaterialRecord::constant(std::string name, cplx eps)
    {
        return MaterialRecord(std::move(name), {{0.0, eps}});
    }

    cplx MaterialRecord::permittivity_at(double f, bool extrapolate) const
    {
        if (points_.size() == 1)
            return points_.front().eps;
        const auto &first = points_.front(), &last = points_.back();
        if ((f < first.frequency_ghz || f > last.frequency_ghz) && !extrapolate)
            fail(ErrorKind::Range, "material '" + name_ + "': " + text::format_double(f) +
                                       " GHz outside tabulated range [" + text::format_double(first.frequency_ghz) +
                                       ", " + text::format_double(last.frequency_ghz) + "]");
        std::size_t i = 1;
        while (i + 1 < points_.size() && f > points_[i].frequency_ghz)
            ++i;
        const auto &a = points_[i - 1], &b = points_[i];
        if (f == a.frequency_ghz)
            return a.eps;
        if (f == b.frequency_ghz)
            return b.eps;
        const double t = (f - a.frequency_ghz) / (b.frequency_ghz - a.frequency_ghz);
        return {a.eps.real() + t * (b.eps.real() - a.eps.real()), a.eps.imag() + t * (b.eps.imag() - a.eps.imag())};
    }

    MaterialRecord load_material_csv(const std::filesystem::path &path, std::string name)
    {
        if (name.empty())
            name = path.stem().string();
        const auto table = text::read_csv(path);
        const auto col = text::require_columns(table, {"frequency_ghz", "eps_real", "eps_imag"}, path.string());
        std::vector<PermittivityPoint> pts;
        for (std::size_t i = 0; i < table.rows.size(); ++i)
        {
            const auto &row = table.rows[i];
            const std::string where = path.string() + ": row " + std::to_string(i + 1);
            if (row.size() != table.header.size())
                fail(ErrorKind::Parse, where + ": wrong field count");
            auto f = text::parse_double(row[col[0]]), re = text::parse_double(row[col[1]]),
                 im = text::parse_double(row[col[2]]);
            if (!f || !re || !im || !std::isfinite(*f) || !std::isfinite(*re) || !std::isfinite(*im))
                fail(ErrorKind::Parse, where + ": missing or non-finite value");
            pts.push_back({*f, {*re, -*im}});
        }
        if (pts.empty())
            fail(ErrorKind::Parse, path.string() + ": no samples");
        try
        {
            return MaterialRecord(std::move(name), std::move(pts));
        }
        catch (const Error &e)
        {
            fail(ErrorKind::Parse, path.string() + ": " + e.what());
        }
    }

    double penetration_depth_mm(cplx eps, double frequency_ghz)
    {
        if (!(frequency_ghz > 0.0))
            fail(ErrorKind::InvalidArgument, "frequency must be positive");
        const double im = std::abs(std::sqrt(eps).imag());
        if (eps.imag() == 0.0 || im == 0.0)
            fail(ErrorKind::UndefinedDepth, "penetration depth is undefined for a lossless medium");
        return 1e3 / (wavenumber(frequency_ghz) * im);
    }

    double penetration_depth_mm(const MaterialRecord &material, double frequency_ghz)
    {
        return penetration_depth_mm(material.permittivity_at(frequency_ghz), frequency_ghz);
    }

    LayerStack::LayerStack(std::vector<Layer> layers, MaterialRecord substrate, MaterialRecord incident)
        : layers_(std::move(layers)), incident_(std::move(incident)), substrate_(std::move(substrate))
    {
        if (layers_.empty())
            fail(ErrorKind::InvalidArgument, "layer stack needs at least one layer");
        for (const auto &l : layers_)
            if (!(l.thickness_mm > 0.0) || !std::isfinite(l.thickness_mm))
                fail(ErrorKind::InvalidArgument, "layer '" + l.material.name() + "' thickness must be positive");
    }

    cplx layered_reflection(const LayerStack &stack, double frequency_ghz, double incidence_deg, Polarization pol,
                            bool extrapolate)
    {
        if (!(frequency_ghz > 0.0))
            fail(ErrorKind::InvalidArgument, "frequency must be positive");
        if (!(incidence_deg >= 0.0 && incidence_deg < 90.0))
            fail(ErrorKind::InvalidArgument, "incidence angle must lie in [0, 90)");

        const double k0 = wavenumber(frequency_ghz);
        const auto &layers = stack.layers();
        std::vector<cplx> eps;
        eps.push_back(stack.incident().permittivity_at(frequency_ghz, extrapolate));
        for (const auto &l : layers)
            eps.push_back(l.material.permittivity_at(frequency_ghz, extrapolate));
        eps.push_back(stack.substrate().permittivity_at(frequency_ghz, extrapolate));

        // transverse wavenumber is conserved; the incident medium is taken as lossless
        const double s = std::sin(incidence_deg * two_pi / 360.0);
        const double sin2 = eps.front().real() * s * s;
        std::vector<cplx> k(eps.size());
        for (std::size_t i = 0; i < eps.size(); ++i)
            k[i] = kz(eps[i], sin2, k0);

        auto interface = [&](std::size_t i, std::size_t j) -> cplx {
            if (pol == Polarization::TE)
                return (k[i] - k[j]) / (k[i] + k[j]);
            return (eps[j] * k[i] - eps[i] * k[j]) / (eps[j] * k[i] + eps[i] * k[j]);
        };

        const std::size_t n = layers.size();
        cplx gamma = interface(n, n + 1);
        for (std::size_t i = n; i >= 1; --i)
        {
            const cplx r = interface(i - 1, i);
            const cplx phase = std::exp(cplx(0.0, -2.0) * k[i] * (layers[i - 1].thickness_mm * 1e-3));
            gamma = (r + gamma * phase) / (1.0 + r * gamma * phase);
        }
        return gamma;
    }

    double skin_thickness_delta(const LayerStack &a, const LayerStack &b, double frequency_ghz)
    {
        const double ga = std::abs(layered_reflection(a, frequency_ghz, 0.0, Polarization::TE));
        const double gb = std::abs(layered_reflection(b, frequency_ghz, 0.0, Polarization::TE));
        return 20.0 * std::log10(ga) - 20.0 * std::log10(gb);
    }

    LayerStack parse_stack_json(const std::string &text, const std::filesystem::path &base_dir)
    {
        try
        {
            const auto j = nlohmann::json::parse(text);
            std::map<std::string, MaterialRecord> known{
                {"air", MaterialRecord::constant("air", 1.0)},
                {"vacuum", MaterialRecord::constant("vacuum", 1.0)},
            };
            if (j.contains("materials"))
            {
                for (const auto &[name, def] : j.at("materials").items())
                {
                    if (def.is_string())
                    {
                        std::filesystem::path p = def.get<std::string>();
                        if (p.is_relative())
                            p = base_dir / p;
                        if (!std::filesystem::exists(p))
                            fail(ErrorKind::Config, "material file '" + p.string() + "' does not exist");
                        known.insert_or_assign(name, load_material_csv(p, name));
                    }
                    else
                        known.insert_or_assign(name, MaterialRecord::constant(
                                                         name, {def.at("eps_real").get<double>(),
                                                                -def.value("eps_imag", 0.0)}));
                }
            }
            auto lookup = [&](const std::string &name) {
                const auto it = known.find(name);
                if (it == known.end())
                    fail(ErrorKind::Lookup, "unknown material '" + name + "'");
                return it->second;
            };
            std::vector<Layer> layers;
            for (const auto &l : j.at("layers"))
                layers.push_back({lookup(l.at("material").get<std::string>()), l.at("thickness_mm").get<double>()});
            return LayerStack(std::move(layers), lookup(j.value("substrate", std::string("air"))),
                              lookup(j.value("incident", std::string("air"))));
        }
        catch (const nlohmann::json::exception &e)
        {
            fail(ErrorKind::Parse, std::string("layer stack: ") + e.what());
        }
    }

    LayerStack load_stack_json(const std::filesystem::path &path)
    {
        try
        {
            return parse_stack_json(text::read_file(path), path.parent_path());
        }
        catch (const Error &e)
        {
            if (e.kind() == ErrorKind::Parse)
                fail(ErrorKind::Parse, path.string() + ": " + e.what());
            throw;
        }
    }
}
