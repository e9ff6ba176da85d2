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

// arraycov: batch front end for array coverage evaluation.
//
// Usage:
//   arraycov <grid|deembed|synth|coverage|compare|reflect> --config run.json
//            [--output-dir DIR] [--bits N] [--grid-points N] [--levels 0.1,0.5]
//
// Every stage reads one JSON run configuration. Relative paths inside it are
// resolved against the configuration file's directory. Fields used per stage:
//
// {
//   "output_dir": "out",
//   "simulated": "sim_patterns.csv",        // pattern CSV (+ .json sidecar)
//   "measured": "meas_patterns.csv",
//   "grid": { "type": "uniform", "points": 301 },
//        // or { "type": "regular", "theta_step_deg": 1, "phi_step_deg": 10 }
//   "deembed": {
//     "floor_db": -60,
//     "averaging": "db-mean",               // db-mean | linear-ratio
//     "windows": { "1V": { "theta_deg": 90, "phi_deg": 90, "half_width_deg": 60 } },
//     "default_window": { "theta_deg": 90, "phi_deg": 90, "half_width_deg": 60 }
//   },
//   "plan": { "bits": 3, "subarrays": [ { "label": "front-V", "feeds": ["1V", "3V", "5V", "7V"] } ] },
//   "coverage": {
//     "source": "simulated",                // simulated | measured
//     "loss_table": "loss_table.csv",       // optional, applied to the source
//     "weighting": "solid-angle",           // solid-angle | sample-count
//     "dump_realizations": false,
//     "threads": 0
//   },
//   "levels": [0.1, 0.5, 0.9],
//   "compare": { "a": "meas/gain_map.csv", "b": "sim/gain_map.csv", "labels": ["measured", "simulated"] },
//   "reflect": {
//     "stack": "film.json", "reference_stack": "other.json",
//     "frequencies_ghz": { "start": 20, "stop": 40, "step": 0.5 },   // or a list
//     "incidence_deg": 0, "polarization": "TE"
//   }
// }
//
// Exit status: 0 success, 1 internal, 2 configuration, 3 parse, 4 numeric,
// 5 lookup. Data files carry no run metadata; manifest.json holds it.

#include "arraycov/arraycov.h"
#include "handles.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace arraycov::cli;

namespace
{
    enum ExitCode
    {
        exit_ok = 0,
        exit_internal = 1,
        exit_config = 2,
        exit_parse = 3,
        exit_numeric = 4,
        exit_lookup = 5
    };

    int exit_code_for(ac_status status)
    {
        switch (status)
        {
        case AC_OK: return exit_ok;
        case AC_ERR_CONFIG:
        case AC_ERR_IO: return exit_config;
        case AC_ERR_PARSE: return exit_parse;
        case AC_ERR_LOOKUP: return exit_lookup;
        case AC_ERR_INVALID_ARGUMENT:
        case AC_ERR_UNSUPPORTED:
        case AC_ERR_CAPACITY:
        case AC_ERR_RANGE:
        case AC_ERR_ESTIMATION:
        case AC_ERR_UNDEFINED_DEPTH: return exit_numeric;
        default: return exit_internal;
        }
    }

    struct Overrides
    {
        std::string config;
        std::string output_dir;
        std::optional<int> bits;
        std::optional<int> grid_points;
        std::string levels;
        std::optional<unsigned> threads;
        bool dump = false;
        std::string compare_a, compare_b;
        std::string stack;
    };

    class RunConfig
    {
    public:
        RunConfig(const Overrides &o) : overrides_(o)
        {
            const fs::path path = o.config;
            if (!fs::exists(path))
                config_error("config file '" + path.string() + "' does not exist");
            std::ifstream in(path);
            try
            {
                doc_ = json::parse(in);
            }
            catch (const json::exception &e)
            {
                throw Failure(AC_ERR_PARSE, "parse error: " + path.string() + ": " + e.what());
            }
            if (!doc_.is_object())
                config_error("top level of the config must be an object");
            base_ = path.parent_path();
            if (base_.empty())
                base_ = ".";

            if (!o.output_dir.empty())
                output_dir_ = o.output_dir;
            else
                output_dir_ = resolve(doc_.value("output_dir", std::string(".")));
            parse_levels();
        }

        const json &doc() const { return doc_; }
        const Overrides &overrides() const { return overrides_; }
        const fs::path &output_dir() const { return output_dir_; }
        const std::vector<double> &levels() const { return levels_; }

        fs::path resolve(const std::string &p) const
        {
            fs::path path = p;
            return path.is_relative() ? base_ / path : path;
        }

        json section(const char *name) const
        {
            if (!doc_.contains(name))
                return json::object();
            if (!doc_[name].is_object())
                config_error(std::string("'") + name + "' must be an object");
            return doc_[name];
        }

        // Path-valued key that must name an existing file.
        fs::path input_file(const json &obj, const char *key, const std::string &what) const
        {
            if (!obj.contains(key) || !obj[key].is_string())
                config_error(what + " ('" + key + "') is not set");
            const auto p = resolve(obj[key].get<std::string>());
            if (!fs::exists(p))
                config_error(what + " '" + p.string() + "' does not exist");
            return p;
        }

    private:
        void parse_levels()
        {
            if (!overrides_.levels.empty())
            {
                std::stringstream ss(overrides_.levels);
                std::string item;
                while (std::getline(ss, item, ','))
                {
                    try
                    {
                        std::size_t used = 0;
                        levels_.push_back(std::stod(item, &used));
                        if (used != item.size())
                            throw std::invalid_argument(item);
                    }
                    catch (const std::exception &)
                    {
                        config_error("bad --levels entry '" + item + "'");
                    }
                }
            }
            else if (doc_.contains("levels"))
            {
                try
                {
                    levels_ = doc_["levels"].get<std::vector<double>>();
                }
                catch (const json::exception &)
                {
                    config_error("'levels' must be a list of numbers");
                }
            }
            else
                levels_ = {0.1, 0.5, 0.9};
            for (double p : levels_)
                if (!(p > 0.0 && p < 1.0))
                    config_error("percentile levels must lie in (0, 1)");
        }

        Overrides overrides_;
        json doc_;
        fs::path base_;
        fs::path output_dir_;
        std::vector<double> levels_;
    };

    // Outputs are staged and written only after every computation succeeded.
    class OutputSet
    {
    public:
        explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

        void add(const std::string &name, std::function<void(const std::string &)> writer)
        {
            pending_.push_back({name, std::move(writer)});
        }

        void add_text(const std::string &name, std::string content)
        {
            add(name, [content = std::move(content)](const std::string &path) {
                std::ofstream out(path, std::ios::binary | std::ios::trunc);
                out << content;
                if (!out)
                    throw Failure(AC_ERR_IO, "i/o error: cannot write '" + path + "'");
            });
        }

        void commit(const std::string &subcommand, const RunConfig &cfg)
        {
            std::error_code ec;
            fs::create_directories(dir_, ec);
            if (ec)
                throw Failure(AC_ERR_IO, "i/o error: cannot create '" + dir_.string() + "': " + ec.message());
            ordered_json manifest;
            manifest["tool"] = "arraycov";
            manifest["version"] = ac_version();
            manifest["subcommand"] = subcommand;
            manifest["config"] = fs::absolute(cfg.overrides().config).lexically_normal().string();
            manifest["started_utc"] = started_;
            manifest["outputs"] = ordered_json::array();
            for (const auto &p : pending_)
            {
                p.writer((dir_ / p.name).string());
                manifest["outputs"].push_back(p.name);
                std::cout << "wrote " << (dir_ / p.name).string() << "\n";
            }
            std::ofstream(dir_ / "manifest.json", std::ios::binary | std::ios::trunc) << manifest.dump(2) << "\n";
        }

    private:
        struct Pending
        {
            std::string name;
            std::function<void(const std::string &)> writer;
        };
        fs::path dir_;
        std::vector<Pending> pending_;
        std::string started_ = [] {
            const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            char buf[32];
            std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
            return std::string(buf);
        }();
    };

    ordered_json number_or_null(double v)
    {
        return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
    }

    std::string fmt(double v)
    {
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        std::ostringstream ss;
        ss.precision(17);
        ss << v;
        return ss.str();
    }

    Grid build_grid(const RunConfig &cfg, bool required)
    {
        if (cfg.overrides().grid_points)
            return make<Grid>(ac_grid_uniform, *cfg.overrides().grid_points);
        const auto g = cfg.section("grid");
        if (g.empty())
        {
            if (required)
                config_error("'grid' is not set");
            return nullptr;
        }
        const std::string type = g.value("type", std::string("uniform"));
        if (type == "uniform")
            return make<Grid>(ac_grid_uniform, g.value("points", 301));
        if (type == "regular")
            return make<Grid>(ac_grid_regular, g.value("theta_step_deg", 1.0), g.value("phi_step_deg", 10.0));
        config_error("unknown grid type '" + type + "'");
    }

    Plan build_plan(const RunConfig &cfg)
    {
        if (!cfg.doc().contains("plan"))
            config_error("'plan' is not set");
        Plan plan = make<Plan>(ac_plan_from_json, cfg.doc()["plan"].dump().c_str());
        if (cfg.overrides().bits)
            check(ac_plan_set_bits(plan.get(), *cfg.overrides().bits));
        return plan;
    }

    ac_cdf_weighting weighting_of(const json &section)
    {
        const std::string w = section.value("weighting", std::string("solid-angle"));
        if (w == "solid-angle")
            return AC_CDF_SOLID_ANGLE;
        if (w == "sample-count")
            return AC_CDF_SAMPLE_COUNT;
        config_error("unknown weighting '" + w + "'");
    }

    std::string grid_kind_name(const ac_grid *g)
    {
        return ac_grid_get_kind(g) == AC_GRID_REGULAR ? "regular" : "uniform-sphere";
    }

    // ---- stages ------------------------------------------------------------

    void run_grid(const RunConfig &cfg)
    {
        Grid grid = build_grid(cfg, true);
        const ac_grid *g = grid.get();
        std::cout << "grid: " << grid_kind_name(g) << ", " << ac_grid_size(g) << " directions, weight sum "
                  << fmt(ac_grid_weight_sum(g)) << " sr\n";
        OutputSet out(cfg.output_dir());
        out.add("grid.csv", [g](const std::string &p) { check(ac_grid_save_csv(g, p.c_str())); });
        out.commit("grid", cfg);
    }

    void run_deembed(const RunConfig &cfg)
    {
        const auto sim_path = cfg.input_file(cfg.doc(), "simulated", "simulated patterns");
        const auto meas_path = cfg.input_file(cfg.doc(), "measured", "measured patterns");
        const auto section = cfg.section("deembed");

        Patterns sim = make<Patterns>(ac_patterns_load_csv, sim_path.string().c_str());
        Patterns meas = make<Patterns>(ac_patterns_load_csv, meas_path.string().c_str());

        // measured data on its own (regular) grid is brought onto the simulated grid
        Grid sim_grid = make<Grid>(ac_patterns_grid, static_cast<const ac_patterns *>(sim.get()));
        Grid meas_grid = make<Grid>(ac_patterns_grid, static_cast<const ac_patterns *>(meas.get()));
        bool same = ac_grid_size(sim_grid.get()) == ac_grid_size(meas_grid.get());
        for (std::size_t i = 0; same && i < ac_grid_size(sim_grid.get()); ++i)
        {
            double t1, p1, t2, p2;
            check(ac_grid_direction(sim_grid.get(), i, &t1, &p1, nullptr));
            check(ac_grid_direction(meas_grid.get(), i, &t2, &p2, nullptr));
            same = std::abs(t1 - t2) < 1e-9 && std::abs(p1 - p2) < 1e-9;
        }
        if (!same)
            meas = make<Patterns>(ac_patterns_resample, static_cast<const ac_patterns *>(meas.get()),
                                  static_cast<const ac_grid *>(sim_grid.get()));

        const json windows = section.value("windows", json::object());
        const json fallback = section.value("default_window", json());
        std::vector<std::string> labels;
        std::vector<ac_beam_window> w;
        const std::size_t nfeeds = ac_patterns_feed_count(sim.get());
        for (std::size_t f = 0; f < nfeeds; ++f)
            labels.emplace_back(ac_patterns_feed_label(sim.get(), f));
        for (const auto &label : labels)
        {
            const json *win = windows.contains(label) ? &windows[label] : (fallback.is_object() ? &fallback : nullptr);
            if (!win)
                config_error("no beam window for feed '" + label + "'");
            w.push_back({label.c_str(), win->value("theta_deg", 90.0), win->value("phi_deg", 0.0),
                         win->value("half_width_deg", 60.0)});
        }
        const std::string averaging = section.value("averaging", std::string("db-mean"));
        if (averaging != "db-mean" && averaging != "linear-ratio")
            config_error("unknown averaging '" + averaging + "'");

        LossTable table = make<LossTable>(ac_deembed_estimate, static_cast<const ac_patterns *>(sim.get()),
                                          static_cast<const ac_patterns *>(meas.get()),
                                          static_cast<const ac_beam_window *>(w.data()), w.size(),
                                          section.value("floor_db", -60.0),
                                          averaging == "db-mean" ? AC_LOSS_DB_MEAN : AC_LOSS_LINEAR_RATIO);
        Patterns corrected = make<Patterns>(ac_deembed_apply, static_cast<const ac_patterns *>(meas.get()),
                                            static_cast<const ac_loss_table *>(table.get()));

        for (std::size_t i = 0; i < ac_loss_table_size(table.get()); ++i)
        {
            const char *feed = nullptr;
            double loss = 0.0;
            check(ac_loss_table_entry(table.get(), i, &feed, &loss, nullptr));
            std::cout << feed << ": " << fmt(loss) << " dB\n";
        }
        OutputSet out(cfg.output_dir());
        out.add("loss_table.csv", [t = table.get()](const std::string &p) { check(ac_loss_table_save_csv(t, p.c_str())); });
        out.add("measured_deembedded.csv",
                [c = corrected.get()](const std::string &p) { check(ac_patterns_save_csv(c, p.c_str())); });
        out.commit("deembed", cfg);
    }

    // Source patterns for synthesis, with optional loss table applied and
    // resampled onto the configured grid.
    Patterns load_source(const RunConfig &cfg, std::string &source_name)
    {
        const auto section = cfg.section("coverage");
        source_name = section.value("source", std::string("simulated"));
        if (source_name != "simulated" && source_name != "measured")
            config_error("coverage source must be 'simulated' or 'measured'");
        const auto path = cfg.input_file(cfg.doc(), source_name.c_str(), source_name + " patterns");
        std::optional<fs::path> loss_path;
        if (section.contains("loss_table"))
            loss_path = cfg.input_file(section, "loss_table", "loss table");

        Patterns set = make<Patterns>(ac_patterns_load_csv, path.string().c_str());
        if (loss_path)
        {
            LossTable table = make<LossTable>(ac_loss_table_load_csv, loss_path->string().c_str());
            set = make<Patterns>(ac_deembed_apply, static_cast<const ac_patterns *>(set.get()),
                                 static_cast<const ac_loss_table *>(table.get()));
        }
        if (Grid grid = build_grid(cfg, false))
            set = make<Patterns>(ac_patterns_resample, static_cast<const ac_patterns *>(set.get()),
                                 static_cast<const ac_grid *>(grid.get()));
        return set;
    }

    void run_synth(const RunConfig &cfg)
    {
        Plan plan = build_plan(cfg);
        const bool dump = cfg.overrides().dump || cfg.section("coverage").value("dump_realizations", false);
        const json plan_doc = json::parse(cfg.doc()["plan"].dump());

        Patterns set;
        std::string source;
        if (dump || cfg.doc().contains("simulated") || cfg.doc().contains("measured"))
            set = load_source(cfg, source);

        std::size_t total = 0;
        check(ac_plan_realization_count(plan.get(), &total));
        ordered_json summary;
        summary["bits"] = ac_plan_bits(plan.get());
        summary["subarrays"] = ordered_json::array();
        for (const auto &s : plan_doc.at("subarrays"))
        {
            std::size_t count = 0;
            const auto feeds = s.at("feeds").get<std::vector<std::string>>();
            check(ac_weight_count(feeds.size(), ac_plan_bits(plan.get()), &count));
            summary["subarrays"].push_back({{"label", s.at("label")}, {"feeds", feeds}, {"weight_vectors", count}});
        }
        summary["realizations"] = total;
        if (set)
        {
            // resolves feed labels against the patterns
            GainMap probe = make<GainMap>(ac_max_realized_gain, static_cast<const ac_patterns *>(set.get()),
                                          static_cast<const ac_plan *>(plan.get()), 1u);
            summary["source"] = source;
        }
        std::cout << "realizations: " << total << "\n";

        OutputSet out(cfg.output_dir());
        out.add_text("synth_summary.json", summary.dump(2) + "\n");
        if (dump)
            out.add("realizations.csv", [s = set.get(), p = plan.get()](const std::string &path) {
                check(ac_synth_dump_csv(s, p, path.c_str()));
            });
        out.commit("synth", cfg);
    }

    void run_coverage(const RunConfig &cfg)
    {
        const auto section = cfg.section("coverage");
        const ac_cdf_weighting weighting = weighting_of(section);
        Plan plan = build_plan(cfg);
        std::string source;
        Patterns set = load_source(cfg, source);
        const unsigned threads = cfg.overrides().threads.value_or(section.value("threads", 0u));
        const bool dump = cfg.overrides().dump || section.value("dump_realizations", false);

        GainMap map = make<GainMap>(ac_max_realized_gain, static_cast<const ac_patterns *>(set.get()),
                                    static_cast<const ac_plan *>(plan.get()), threads);
        Coverage cov = make<Coverage>(ac_coverage_cdf, static_cast<const ac_gain_map *>(map.get()), weighting);
        Grid grid = make<Grid>(ac_patterns_grid, static_cast<const ac_patterns *>(set.get()));

        std::size_t total = 0;
        check(ac_plan_realization_count(plan.get(), &total));
        double peak = 0.0, median = 0.0, outage = 0.0;
        check(ac_coverage_peak_db(cov.get(), &peak));
        check(ac_coverage_percentile(cov.get(), 0.5, &median));
        check(ac_coverage_percentile(cov.get(), 0.1, &outage));

        ordered_json summary;
        summary["source"] = source;
        summary["subarrays"] = ac_plan_subarray_count(plan.get());
        summary["bits"] = ac_plan_bits(plan.get());
        summary["realizations"] = total;
        summary["grid"] = {{"kind", grid_kind_name(grid.get())},
                           {"points", ac_grid_size(grid.get())},
                           {"weight_sum_sr", ac_grid_weight_sum(grid.get())}};
        summary["weighting"] = weighting == AC_CDF_SOLID_ANGLE ? "solid-angle" : "sample-count";
        summary["peak_gain_db"] = number_or_null(peak);
        summary["median_gain_db"] = number_or_null(median);
        summary["outage_0.1_gain_db"] = number_or_null(outage);
        summary["percentiles"] = ordered_json::array();
        for (double p : cfg.levels())
        {
            double g = 0.0;
            check(ac_coverage_percentile(cov.get(), p, &g));
            summary["percentiles"].push_back({{"level", p}, {"gain_db", number_or_null(g)}});
        }
        std::cout << "realizations: " << total << ", peak " << fmt(peak) << " dB, median " << fmt(median)
                  << " dB, 0.1-outage " << fmt(outage) << " dB\n";

        OutputSet out(cfg.output_dir());
        out.add("gain_map.csv", [m = map.get()](const std::string &p) { check(ac_gain_map_save_csv(m, p.c_str())); });
        out.add("cdf.csv", [c = cov.get()](const std::string &p) { check(ac_coverage_save_csv(c, p.c_str())); });
        out.add("cdf.svg", [c = cov.get(), source](const std::string &p) {
            const ac_coverage *series[] = {c};
            const char *names[] = {source.c_str()};
            check(ac_coverage_write_svg(series, names, 1, "Spherical coverage", p.c_str()));
        });
        out.add("azimuth_cut.svg", [m = map.get()](const std::string &p) {
            check(ac_gain_map_write_azimuth_svg(m, "Maximum realized gain", p.c_str()));
        });
        out.add_text("summary.json", summary.dump(2) + "\n");
        if (dump)
            out.add("realizations.csv", [s = set.get(), p = plan.get()](const std::string &path) {
                check(ac_synth_dump_csv(s, p, path.c_str()));
            });
        out.commit("coverage", cfg);
    }

    void run_compare(const RunConfig &cfg)
    {
        const auto section = cfg.section("compare");
        json files = section;
        if (!cfg.overrides().compare_a.empty())
            files["a"] = cfg.overrides().compare_a;
        if (!cfg.overrides().compare_b.empty())
            files["b"] = cfg.overrides().compare_b;
        const auto a_path = cfg.input_file(files, "a", "first gain map");
        const auto b_path = cfg.input_file(files, "b", "second gain map");
        const auto labels = section.value("labels", std::vector<std::string>{"a", "b"});
        if (labels.size() != 2)
            config_error("compare.labels needs two entries");
        const ac_cdf_weighting weighting = weighting_of(section);

        GainMap a = make<GainMap>(ac_gain_map_load_csv, a_path.string().c_str());
        GainMap b = make<GainMap>(ac_gain_map_load_csv, b_path.string().c_str());
        Coverage ca = make<Coverage>(ac_coverage_cdf, static_cast<const ac_gain_map *>(a.get()), weighting);
        Coverage cb = make<Coverage>(ac_coverage_cdf, static_cast<const ac_gain_map *>(b.get()), weighting);

        const auto &levels = cfg.levels();
        std::vector<double> deltas(levels.size());
        check(ac_coverage_compare(ca.get(), cb.get(), levels.data(), levels.size(), deltas.data()));

        std::string csv = "level,gain_a_db,gain_b_db,delta_db\n";
        ordered_json report;
        report["a"] = labels[0];
        report["b"] = labels[1];
        report["levels"] = ordered_json::array();
        for (std::size_t i = 0; i < levels.size(); ++i)
        {
            double ga = 0.0, gb = 0.0;
            check(ac_coverage_percentile(ca.get(), levels[i], &ga));
            check(ac_coverage_percentile(cb.get(), levels[i], &gb));
            csv += fmt(levels[i]) + ',' + fmt(ga) + ',' + fmt(gb) + ',' + fmt(deltas[i]) + '\n';
            report["levels"].push_back({{"level", levels[i]},
                                        {"gain_a_db", number_or_null(ga)},
                                        {"gain_b_db", number_or_null(gb)},
                                        {"delta_db", number_or_null(deltas[i])}});
            std::cout << "p=" << fmt(levels[i]) << ": delta " << fmt(deltas[i]) << " dB\n";
        }
        double pa = 0.0, pb = 0.0;
        check(ac_coverage_peak_db(ca.get(), &pa));
        check(ac_coverage_peak_db(cb.get(), &pb));
        report["peak_delta_db"] = number_or_null(pa - pb);

        // per-theta-cut error only exists for a shared regular grid
        std::string mae_csv;
        std::size_t rings = 0;
        if (ac_mae_per_theta_cut(a.get(), b.get(), -60.0, nullptr, nullptr, 0, &rings) == AC_OK)
        {
            std::vector<double> theta(rings), mae(rings);
            check(ac_mae_per_theta_cut(a.get(), b.get(), -60.0, theta.data(), mae.data(), rings, &rings));
            mae_csv = "theta_deg,mae_db\n";
            for (std::size_t i = 0; i < rings; ++i)
                mae_csv += fmt(theta[i]) + ',' + fmt(mae[i]) + '\n';
        }

        OutputSet out(cfg.output_dir());
        out.add_text("compare.csv", csv);
        out.add_text("compare.json", report.dump(2) + "\n");
        out.add("compare_cdf.svg", [&, pa_ = ca.get(), pb_ = cb.get()](const std::string &p) {
            const ac_coverage *series[] = {pa_, pb_};
            const char *names[] = {labels[0].c_str(), labels[1].c_str()};
            check(ac_coverage_write_svg(series, names, 2, "Spherical coverage comparison", p.c_str()));
        });
        if (!mae_csv.empty())
            out.add_text("mae_theta.csv", mae_csv);
        out.commit("compare", cfg);
    }

    std::vector<double> sweep_of(const json &spec)
    {
        std::vector<double> f;
        if (spec.is_array())
            f = spec.get<std::vector<double>>();
        else if (spec.is_number())
            f = {spec.get<double>()};
        else if (spec.is_object())
        {
            const double start = spec.at("start").get<double>(), stop = spec.at("stop").get<double>(),
                         step = spec.at("step").get<double>();
            if (!(step > 0.0) || stop < start)
                config_error("frequency sweep needs step > 0 and stop >= start");
            const long n = std::lround(std::floor((stop - start) / step + 1e-9));
            for (long i = 0; i <= n; ++i)
                f.push_back(start + double(i) * step);
        }
        if (f.empty())
            config_error("'frequencies_ghz' is empty");
        return f;
    }

    void run_reflect(const RunConfig &cfg)
    {
        auto section = cfg.section("reflect");
        if (!cfg.overrides().stack.empty())
            section["stack"] = cfg.overrides().stack;
        const auto stack_path = cfg.input_file(section, "stack", "layer stack");
        std::optional<fs::path> ref_path;
        if (section.contains("reference_stack"))
            ref_path = cfg.input_file(section, "reference_stack", "reference layer stack");
        std::vector<double> freqs;
        try
        {
            freqs = sweep_of(section.value("frequencies_ghz", json(28.0)));
        }
        catch (const json::exception &e)
        {
            config_error(std::string("frequencies_ghz: ") + e.what());
        }
        const double incidence = section.value("incidence_deg", 0.0);
        const std::string pol = section.value("polarization", std::string("TE"));
        if (pol != "TE" && pol != "TM")
            config_error("polarization must be TE or TM");

        Stack stack = make<Stack>(ac_stack_load_json, stack_path.string().c_str());
        Stack ref;
        if (ref_path)
            ref = make<Stack>(ac_stack_load_json, ref_path->string().c_str());

        std::string csv = "frequency_ghz,gamma_re,gamma_im,gamma_abs,gamma_db";
        csv += ref ? ",delta_db\n" : "\n";
        for (double f : freqs)
        {
            double re = 0.0, im = 0.0;
            check(ac_stack_reflection(stack.get(), f, incidence, pol == "TE" ? AC_POL_TE : AC_POL_TM, &re, &im));
            const double mag = std::hypot(re, im);
            const double db = mag == 0.0 ? -INFINITY : 20.0 * std::log10(mag);
            csv += fmt(f) + ',' + fmt(re) + ',' + fmt(im) + ',' + fmt(mag) + ',' + fmt(db);
            if (ref)
            {
                double rre = 0.0, rim = 0.0;
                check(ac_stack_reflection(ref.get(), f, incidence, pol == "TE" ? AC_POL_TE : AC_POL_TM, &rre, &rim));
                const double rmag = std::hypot(rre, rim);
                csv += ',' + fmt(db - (rmag == 0.0 ? -INFINITY : 20.0 * std::log10(rmag)));
            }
            csv += '\n';
        }
        std::cout << "reflection evaluated at " << freqs.size() << " frequencies\n";
        OutputSet out(cfg.output_dir());
        out.add_text("reflect.csv", csv);
        out.commit("reflect", cfg);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"arraycov - array pattern synthesis and spherical coverage evaluation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ac_version()));

    Overrides o;
    auto common = [&](CLI::App *sub) {
        sub->add_option("--config", o.config, "Run configuration (JSON)")->required();
        sub->add_option("--output-dir", o.output_dir, "Output directory (overrides output_dir)");
    };

    auto *grid = app.add_subcommand("grid", "Write a direction grid");
    common(grid);
    grid->add_option("--grid-points", o.grid_points, "Uniform grid with about N directions");

    auto *deembed = app.add_subcommand("deembed", "Estimate per-feed losses from simulated vs measured beams");
    common(deembed);

    auto *synth = app.add_subcommand("synth", "Enumerate quantized weights and count realizations");
    common(synth);
    synth->add_option("--bits", o.bits, "Phase-shifter bit depth");
    synth->add_option("--grid-points", o.grid_points, "Uniform grid with about N directions");
    synth->add_flag("--dump", o.dump, "Write every realization as CSV");

    auto *coverage = app.add_subcommand("coverage", "Maximum realized gain and spherical coverage CDF");
    common(coverage);
    coverage->add_option("--bits", o.bits, "Phase-shifter bit depth");
    coverage->add_option("--grid-points", o.grid_points, "Uniform grid with about N directions");
    coverage->add_option("--levels", o.levels, "Comma separated probability levels");
    coverage->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    coverage->add_flag("--dump", o.dump, "Write every realization as CSV");

    auto *compare = app.add_subcommand("compare", "Percentile differences between two gain maps");
    common(compare);
    compare->add_option("--levels", o.levels, "Comma separated probability levels");
    compare->add_option("--a", o.compare_a, "First gain map CSV");
    compare->add_option("--b", o.compare_b, "Second gain map CSV");

    auto *reflect = app.add_subcommand("reflect", "Layered-media reflection sweep");
    common(reflect);
    reflect->add_option("--stack", o.stack, "Layer stack JSON");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return exit_config;
    }

    try
    {
        const RunConfig cfg(o);
        if (grid->parsed())
            run_grid(cfg);
        else if (deembed->parsed())
            run_deembed(cfg);
        else if (synth->parsed())
            run_synth(cfg);
        else if (coverage->parsed())
            run_coverage(cfg);
        else if (compare->parsed())
            run_compare(cfg);
        else if (reflect->parsed())
            run_reflect(cfg);
    }
    catch (const Failure &e)
    {
        std::cerr << "arraycov: " << e.what() << "\n";
        return exit_code_for(e.status());
    }
    catch (const json::exception &e)
    {
        std::cerr << "arraycov: configuration error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "arraycov: internal error: " << e.what() << "\n";
        return exit_internal;
    }
    return exit_ok;
}
