// SPDX-License-Identifier: Apache-2.0
//
// losmimo - line-of-sight MIMO workbench for randomly oriented antenna arrays
// Copyright (C) 2026 The losmimo authors
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

// Command implementations behind the losmimo executable. Kept in a header so
// the test suite can drive the subcommands in-process.

#ifndef LOSMIMO_TOOLS_CLI_APP_HPP
#define LOSMIMO_TOOLS_CLI_APP_HPP

#include "losmimo/losmimo.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace losmimo::cli
{
    using json = nlohmann::ordered_json;
    namespace fs = std::filesystem;

    inline constexpr const char *version = "0.1.0";

    enum ExitCode : int
    {
        exit_ok = 0,
        exit_config = 2,
        exit_infeasible = 3,
        exit_runtime = 4
    };

    struct Options
    {
        std::string command;
        std::optional<fs::path> config;
        std::optional<std::uint64_t> seed;
        fs::path out = "out";
        std::size_t workers = 1;
        std::optional<std::string> scheme; // gain only
    };

    // Worker count from --workers, then LOSMIMO_WORKERS, then 1
    inline std::size_t resolve_workers(std::optional<std::size_t> flag)
    {
        if (flag)
            return std::max<std::size_t>(1, *flag);
        if (const char *env = std::getenv("LOSMIMO_WORKERS"))
        {
            try
            {
                const long v = std::stol(env);
                if (v >= 1)
                    return static_cast<std::size_t>(v);
            }
            catch (const std::exception &)
            {
            }
            throw config_error(std::string("LOSMIMO_WORKERS must be a positive integer, got '") + env + "'.");
        }
        return 1;
    }

    // ------------------------------------------------------------------------
    // JSON config access with field-path diagnostics

    namespace detail
    {
        inline json load_json(const fs::path &p)
        {
            std::ifstream in(p, std::ios::binary);
            if (!in)
                throw config_error("Cannot read config '" + p.string() + "'.");
            std::stringstream ss;
            ss << in.rdbuf();
            const std::string text = ss.str();
            try
            {
                return json::parse(text);
            }
            catch (const json::parse_error &e)
            {
                const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
                std::size_t line = 1, col = 1;
                for (std::size_t i = 0; i + 1 < upto; ++i)
                    text[i] == '\n' ? (++line, col = 1) : ++col;
                throw config_error(p.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                   ": invalid JSON (" + e.what() + ")");
            }
        }

        template <typename T>
        T field(const json &j, const std::string &key, const T &fallback, const std::string &where)
        {
            if (!j.is_object() || !j.contains(key) || j.at(key).is_null())
                return fallback;
            try
            {
                return j.at(key).get<T>();
            }
            catch (const json::exception &)
            {
                throw config_error("field '" + where + key + "': wrong type (" + std::string(j.at(key).type_name()) + ").");
            }
        }

        inline std::vector<double> range_or_list(const json &j, const std::string &key, std::vector<double> fallback,
                                                 const std::string &where)
        {
            if (!j.is_object() || !j.contains(key))
                return fallback;
            const json &v = j.at(key);
            if (v.is_array())
            {
                std::vector<double> out;
                for (std::size_t i = 0; i < v.size(); ++i)
                {
                    if (!v[i].is_number())
                        throw config_error("field '" + where + key + "[" + std::to_string(i) + "]': expected a number.");
                    out.push_back(v[i].get<double>());
                }
                return out;
            }
            if (v.is_object())
            {
                const std::string w = where + key + ".";
                const double start = field<double>(v, "start", 0.0, w);
                const double stop = field<double>(v, "stop", start, w);
                const double step = field<double>(v, "step", 1.0, w);
                if (!(step > 0.0) || stop < start)
                    throw config_error("field '" + where + key + "': need step > 0 and stop >= start.");
                std::vector<double> out;
                const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
                for (std::size_t i = 0; i <= n; ++i)
                    out.push_back(start + double(i) * step);
                return out;
            }
            throw config_error("field '" + where + key + "': expected a list or {start, stop, step}.");
        }

        inline ArrayKind kind_field(const json &j, const std::string &key, ArrayKind fallback, const std::string &where)
        {
            const std::string s = field<std::string>(j, key, std::string(to_string(fallback)), where);
            try
            {
                return parse_array_kind(s);
            }
            catch (const std::invalid_argument &e)
            {
                throw config_error("field '" + where + key + "': " + e.what());
            }
        }

        inline Scheme scheme_of(const std::string &s, const std::string &where)
        {
            try
            {
                return parse_scheme(s);
            }
            catch (const std::invalid_argument &e)
            {
                throw config_error("field '" + where + "': " + e.what());
            }
        }

        // System description; every key is optional and falls back to the
        // ULA x URA link used for the BER figures.
        inline SystemConfig parse_system(const json &j, const std::string &where)
        {
            SystemConfig s;
            s.lambda = field<double>(j, "lambda", s.lambda, where);
            s.rotate_tx = field<bool>(j, "rotate_tx", s.rotate_tx, where);
            s.rotate_rx = field<bool>(j, "rotate_rx", s.rotate_rx, where);

            if (j.contains("tx"))
            {
                const json &t = j.at("tx");
                const std::string w = where + "tx.";
                s.tx_kind = kind_field(t, "kind", s.tx_kind, w);
                s.d_t = field<double>(t, "spacing", s.d_t, w);
            }
            if (j.contains("rx"))
            {
                const json &r = j.at("rx");
                const std::string w = where + "rx.";
                s.rx_kind = kind_field(r, "kind", s.rx_kind, w);
                s.rx.n = field<std::size_t>(r, "n", s.rx_kind == ArrayKind::ura ? s.rx.n : 0, w);
                s.rx.rows = field<std::size_t>(r, "rows", 0, w);
                s.rx.cols = field<std::size_t>(r, "cols", 0, w);
                s.rx.spacing = field<double>(r, "spacing", s.rx.spacing, w);
                const std::string file = field<std::string>(r, "coords_file", "", w);
                if (!file.empty())
                    s.rx.coords_file = file;
            }
            if (j.contains("R"))
                s.R_min = s.R_max = field<double>(j, "R", 0.0, where);
            if (j.contains("distance"))
            {
                const json &d = j.at("distance");
                const std::string w = where + "distance.";
                s.R_min = field<double>(d, "min", s.R_min, w);
                s.R_max = field<double>(d, "max", s.R_max, w);
            }
            try
            {
                s.validate();
                (void)make_layout(s.rx_kind, s.rx);
            }
            catch (const config_error &e)
            {
                throw config_error(where.empty() ? e.what() : "in '" + where + "': " + e.what());
            }
            catch (const std::invalid_argument &e)
            {
                throw config_error("field '" + where + "rx': " + e.what());
            }
            return s;
        }

        inline std::string num(double v)
        {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.10g", v);
            return buf;
        }

        inline void write_text(const fs::path &p, const std::string &text)
        {
            std::ofstream f(p, std::ios::binary);
            if (!f)
                throw std::runtime_error("Cannot write '" + p.string() + "'.");
            f << text;
        }
    }

    // ------------------------------------------------------------------------
    // Run context and manifest

    class Run
    {
    public:
        explicit Run(const Options &o) : opt_(o), start_(std::chrono::steady_clock::now())
        {
            fs::create_directories(o.out);
        }

        const Options &options() const { return opt_; }
        fs::path path(const std::string &name) const { return opt_.out / name; }

        // Records an output file that the command has written
        fs::path record(const fs::path &p)
        {
            outputs_.push_back(p.filename().string());
            return p;
        }

        void set_seed(std::uint64_t s) { seed_ = s; }
        void note(const std::string &k, json v) { extra_[k] = std::move(v); }

        void write_manifest(int code, const std::string &error = {}) const
        {
            json m;
            m["subcommand"] = opt_.command;
            m["config"] = opt_.config ? opt_.config->string() : "";
            m["seed"] = seed_ ? json(*seed_) : json(nullptr);
            m["workers"] = opt_.workers;
            m["outputs"] = outputs_;
            m["tool_version"] = version;
            m["wall_clock_seconds"] =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            m["exit_code"] = code;
            m["status"] = code == exit_ok ? "ok" : "failed";
            if (!error.empty())
                m["error"] = error;
            for (const auto &[k, v] : extra_.items())
                m[k] = v;
            detail::write_text(opt_.out / "manifest.json", m.dump(2) + "\n");
        }

    private:
        Options opt_;
        std::chrono::steady_clock::time_point start_;
        std::vector<std::string> outputs_;
        std::optional<std::uint64_t> seed_;
        json extra_ = json::object();
    };

    inline json config_or_empty(const Options &o)
    {
        return o.config ? detail::load_json(*o.config) : json::object();
    }

    inline std::uint64_t resolve_seed(const Options &o, const json &cfg)
    {
        return o.seed ? *o.seed : detail::field<std::uint64_t>(cfg, "seed", 1, "");
    }

    // ------------------------------------------------------------------------
    // Plot scripts

    inline std::string ber_plot_script(const std::vector<std::string> &csvs)
    {
        std::ostringstream s;
        s << "#!/usr/bin/env python3\n"
             "# Plots the BER curves written next to this script.\n"
             "import csv, os\n"
             "import matplotlib\n"
             "matplotlib.use('Agg')\n"
             "import matplotlib.pyplot as plt\n\n"
             "here = os.path.dirname(os.path.abspath(__file__))\n"
             "runs = [";
        for (std::size_t i = 0; i < csvs.size(); ++i)
            s << (i ? ", " : "") << "'" << csvs[i] << "'";
        s << "]\n"
             "fig, ax = plt.subplots()\n"
             "for name in runs:\n"
             "    rows = list(csv.DictReader(open(os.path.join(here, name))))\n"
             "    pts = [(float(r['snr_db']), float(r['ber'])) for r in rows if float(r['ber']) > 0]\n"
             "    if pts:\n"
             "        ax.semilogy(*zip(*pts), marker='o', label=name[:-4])\n"
             "ax.set_xlabel('SNR (dB)')\n"
             "ax.set_ylabel('BER')\n"
             "ax.grid(True, which='both', alpha=0.3)\n"
             "ax.legend()\n"
             "fig.savefig(os.path.join(here, 'ber.png'), dpi=150)\n";
        return s.str();
    }

    inline std::string curves_plot_script()
    {
        return "#!/usr/bin/env python3\n"
               "# Plots mu*(eta), its pentagon variant and the closed-form bound.\n"
               "import csv, os\n"
               "import matplotlib\n"
               "matplotlib.use('Agg')\n"
               "import matplotlib.pyplot as plt\n\n"
               "here = os.path.dirname(os.path.abspath(__file__))\n"
               "rows = list(csv.DictReader(open(os.path.join(here, 'mu_star.csv'))))\n"
               "eta = [float(r['eta']) for r in rows]\n"
               "fig, ax = plt.subplots()\n"
               "ax.plot(eta, [float(r['mu_star']) for r in rows], label='tetrahedron')\n"
               "ax.plot(eta, [float(r['mu_star_pent']) for r in rows], label='pentagon pairs')\n"
               "b = [(e, float(r['bound'])) for e, r in zip(eta, rows) if r['bound']]\n"
               "ax.plot(*zip(*b), '--', label='bound (eta >= 1)')\n"
               "ax.set_xlabel('eta')\n"
               "ax.set_ylabel('max correlation')\n"
               "ax.legend()\n"
               "fig.savefig(os.path.join(here, 'mu_star.png'), dpi=150)\n";
    }

    inline std::string density_plot_script(const std::vector<std::string> &csvs)
    {
        std::ostringstream s;
        s << "#!/usr/bin/env python3\n"
             "# Heat maps of the joint (theta_mu, mu) densities.\n"
             "import csv, os\n"
             "import matplotlib\n"
             "matplotlib.use('Agg')\n"
             "import matplotlib.pyplot as plt\n\n"
             "here = os.path.dirname(os.path.abspath(__file__))\n"
             "for name in [";
        for (std::size_t i = 0; i < csvs.size(); ++i)
            s << (i ? ", " : "") << "'" << csvs[i] << "'";
        s << "]:\n"
             "    rows = list(csv.DictReader(open(os.path.join(here, name))))\n"
             "    th = sorted({float(r['theta_bin_center']) for r in rows})\n"
             "    mu = sorted({float(r['mu_bin_center']) for r in rows})\n"
             "    z = [[0.0] * len(th) for _ in mu]\n"
             "    for r in rows:\n"
             "        z[mu.index(float(r['mu_bin_center']))][th.index(float(r['theta_bin_center']))] = float(r['density'])\n"
             "    fig, ax = plt.subplots()\n"
             "    im = ax.pcolormesh(th, mu, z, shading='nearest')\n"
             "    fig.colorbar(im)\n"
             "    ax.set_xlabel('theta_mu (rad)')\n"
             "    ax.set_ylabel('mu')\n"
             "    fig.savefig(os.path.join(here, name[:-4] + '.png'), dpi=150)\n";
        return s.str();
    }

    inline std::string gain_plot_script()
    {
        return "#!/usr/bin/env python3\n"
               "# Coding gain against channel correlation.\n"
               "import csv, os\n"
               "import matplotlib\n"
               "matplotlib.use('Agg')\n"
               "import matplotlib.pyplot as plt\n\n"
               "here = os.path.dirname(os.path.abspath(__file__))\n"
               "rows = list(csv.DictReader(open(os.path.join(here, 'coding_gain.csv'))))\n"
               "mu = [float(r['mu']) for r in rows]\n"
               "fig, ax = plt.subplots()\n"
               "for k in rows[0]:\n"
               "    if k != 'mu':\n"
               "        ax.plot(mu, [float(r[k]) for r in rows], label=k)\n"
               "ax.set_xlabel('mu')\n"
               "ax.set_ylabel('coding gain')\n"
               "ax.legend()\n"
               "fig.savefig(os.path.join(here, 'coding_gain.png'), dpi=150)\n";
    }

    // ------------------------------------------------------------------------
    // Subcommands

    // {"runs": [{"name", "scheme", "ideal", ...system keys}], shared keys at top level}
    inline void cmd_simulate(Run &run)
    {
        const json cfg = config_or_empty(run.options());
        const std::uint64_t seed = resolve_seed(run.options(), cfg);
        run.set_seed(seed);

        json base = cfg;
        base.erase("runs");
        const json runs = cfg.contains("runs") ? cfg.at("runs") : json::array({json::object()});
        if (!runs.is_array() || runs.empty())
            throw config_error("field 'runs': expected a non-empty list.");

        // Parse everything before running anything
        std::vector<std::pair<std::string, SimConfig>> jobs;
        for (std::size_t i = 0; i < runs.size(); ++i)
        {
            const std::string where = "runs[" + std::to_string(i) + "].";
            json j = base;
            j.merge_patch(runs[i]);
            SimConfig sc;
            sc.system = detail::parse_system(j, where);
            sc.scheme = detail::scheme_of(detail::field<std::string>(j, "scheme", "sm", where), where + "scheme");
            sc.ideal = detail::field<bool>(j, "ideal", false, where);
            sc.snr_db = detail::range_or_list(j, "snr_db", {0, 4, 8, 12, 16, 20, 24, 28, 32}, where);
            sc.max_trials = detail::field<std::uint64_t>(j, "max_trials", sc.max_trials, where);
            sc.target_errors = detail::field<std::uint64_t>(j, "target_errors", sc.target_errors, where);
            sc.block_size = detail::field<std::uint64_t>(j, "block_size", sc.block_size, where);
            sc.seed = seed;
            sc.workers = run.options().workers;
            try
            {
                sc.validate();
            }
            catch (const config_error &e)
            {
                throw config_error("in '" + where + "': " + e.what());
            }
            const std::string name = detail::field<std::string>(j, "name", "run" + std::to_string(i), where);
            if (name.empty() || name.find_first_of("/\\") != std::string::npos)
                throw config_error("field '" + where + "name': must be a plain file stem.");
            jobs.emplace_back(name, sc);
        }

        std::shared_ptr<const MuStarCurve> curve;
        std::vector<std::string> csvs;
        for (const auto &[name, sc] : jobs)
        {
            if (!curve && sc.system.tx_kind == ArrayKind::pentagon && sc.system.rx_kind == ArrayKind::tetrahedron)
                curve = std::make_shared<const MuStarCurve>(MuStarCurve::build(0.3, 3.0, 0.01, sc.workers));
            const BerCurve c = run_ber(sc, curve);
            write_ber_csv(run.record(run.path(name + ".csv")), c);
            csvs.push_back(name + ".csv");
            std::cout << name << ":";
            for (const auto &p : c)
                std::cout << " " << p.snr_db << "dB=" << p.ber;
            std::cout << "\n";
        }
        detail::write_text(run.record(run.path("plot_ber.py")), ber_plot_script(csvs));
    }

    // {"mu_max", "lambda", "d_t", "d_r", "tx_kinds": ["triangle", "pentagon"]}
    inline void cmd_design(Run &run)
    {
        const json cfg = config_or_empty(run.options());
        DesignSpec base;
        base.mu_max = detail::field<double>(cfg, "mu_max", 2.0 / 3.0, "");
        base.lambda = detail::field<double>(cfg, "lambda", 0.0042, "");
        base.d_t = detail::field<double>(cfg, "d_t", 0.06, "");
        base.d_r = detail::field<double>(cfg, "d_r", 0.25, "");

        std::vector<ArrayKind> kinds;
        if (cfg.contains("tx_kinds"))
        {
            const auto list = detail::field<std::vector<std::string>>(cfg, "tx_kinds", {}, "");
            for (const auto &k : list)
            {
                try
                {
                    kinds.push_back(parse_array_kind(k));
                }
                catch (const std::invalid_argument &e)
                {
                    throw config_error(std::string("field 'tx_kinds': ") + e.what());
                }
            }
        }
        else
            kinds.push_back(detail::kind_field(cfg, "tx_kind", ArrayKind::pentagon, ""));
        if (kinds.empty())
            throw config_error("field 'tx_kinds': expected at least one transmit array.");
        for (auto k : kinds)
        {
            DesignSpec s = base;
            s.tx_kind = k;
            s.validate();
        }

        const MuStarCurve curve = MuStarCurve::build(0.3, 3.0, 0.01, run.options().workers);
        std::ostringstream csv, report;
        csv << "tx_kind,mu_max,eta_min,eta_max,R_min,R_max,beta_max\n";
        for (auto k : kinds)
        {
            DesignSpec s = base;
            s.tx_kind = k;
            const DesignResult r = design(s, curve);
            csv << to_string(k) << ',' << detail::num(r.mu_max) << ',' << detail::num(r.eta_min) << ','
                << detail::num(r.eta_max) << ',' << detail::num(r.R_min) << ',' << detail::num(r.R_max) << ','
                << detail::num(r.beta_max) << '\n';
            report << to_string(k) << " transmit array, mu_max = " << r.mu_max << "\n"
                   << "  eta in [" << r.eta_min << ", " << r.eta_max << "], beta_max = " << r.beta_max << " rad\n"
                   << "  R in [" << r.R_min << ", " << r.R_max << "] m\n";
        }
        detail::write_text(run.record(run.path("design.csv")), csv.str());
        detail::write_text(run.record(run.path("design.txt")), report.str());
        std::cout << report.str();
    }

    // {"eta": {"start", "stop", "step"}}
    inline void cmd_curves(Run &run)
    {
        const json cfg = config_or_empty(run.options());
        const json eta = cfg.contains("eta") ? cfg.at("eta") : json::object();
        const double lo = detail::field<double>(eta, "start", 0.3, "eta.");
        const double hi = detail::field<double>(eta, "stop", 3.0, "eta.");
        const double step = detail::field<double>(eta, "step", 0.01, "eta.");
        if (!(lo > 0.0 && hi > lo && step > 0.0))
            throw config_error("field 'eta': need 0 < start < stop and step > 0.");

        const MuStarCurve curve = MuStarCurve::build(lo, hi, step, run.options().workers);
        std::ostringstream csv;
        csv << "eta,mu_star,mu_star_pent,bound\n";
        for (const auto &p : curve.points())
        {
            csv << detail::num(p.eta) << ',' << detail::num(p.value) << ',' << detail::num(curve.pent(p.eta)) << ',';
            if (p.eta >= 1.0 - 1e-12)
                csv << detail::num(mu_star_bound(std::max(1.0, p.eta)));
            csv << '\n';
        }
        detail::write_text(run.record(run.path("mu_star.csv")), csv.str());
        detail::write_text(run.record(run.path("plot_mu_star.py")), curves_plot_script());
    }

    // {"setups": [{"name", ...system keys}], "theta_bins", "mu_bins", "samples"}
    inline void cmd_density(Run &run)
    {
        const json cfg = config_or_empty(run.options());
        const std::uint64_t seed = resolve_seed(run.options(), cfg);
        run.set_seed(seed);

        json base = cfg;
        base.erase("setups");
        const json setups = cfg.contains("setups") ? cfg.at("setups") : json::array({json::object()});
        if (!setups.is_array() || setups.empty())
            throw config_error("field 'setups': expected a non-empty list.");

        std::vector<std::pair<std::string, DensityConfig>> jobs;
        for (std::size_t i = 0; i < setups.size(); ++i)
        {
            const std::string where = "setups[" + std::to_string(i) + "].";
            json j = base;
            j.merge_patch(setups[i]);
            DensityConfig dc;
            dc.system = detail::parse_system(j, where);
            dc.theta_bins = detail::field<std::size_t>(j, "theta_bins", dc.theta_bins, where);
            dc.mu_bins = detail::field<std::size_t>(j, "mu_bins", dc.mu_bins, where);
            dc.samples = detail::field<std::uint64_t>(j, "samples", dc.samples, where);
            dc.seed = seed;
            dc.workers = run.options().workers;
            try
            {
                dc.validate();
            }
            catch (const config_error &e)
            {
                throw config_error("in '" + where + "': " + e.what());
            }
            jobs.emplace_back(detail::field<std::string>(j, "name", "density" + std::to_string(i), where), dc);
        }

        std::vector<std::string> csvs;
        for (const auto &[name, dc] : jobs)
        {
            const DensityGrid g = joint_density(dc);
            write_density_csv(run.record(run.path(name + ".csv")), g);
            csvs.push_back(name + ".csv");

            std::ostringstream f;
            f << "mu_bin_center,samples,chi2,p_value\n";
            std::size_t failed = 0;
            const auto rows = theta_flatness(g);
            for (const auto &r : rows)
            {
                f << detail::num(g.mu_center(r.mu_bin)) << ',' << r.samples << ',' << detail::num(r.chi2) << ','
                  << detail::num(r.p_value) << '\n';
                failed += r.p_value < 0.01;
            }
            detail::write_text(run.record(run.path(name + "_flatness.csv")), f.str());
            std::cout << name << ": " << g.samples << " samples, " << rows.size() << " rows tested, " << failed
                      << " below 1% significance\n";
        }
        detail::write_text(run.record(run.path("plot_density.py")), density_plot_script(csvs));
    }

    // {"schemes": [...], "mu": {"start", "stop", "step"}}; --scheme restricts to one
    inline void cmd_gain(Run &run)
    {
        const json cfg = config_or_empty(run.options());
        std::vector<std::string> names;
        if (run.options().scheme)
            names = {*run.options().scheme};
        else
            names = detail::field<std::vector<std::string>>(cfg, "schemes", {"sm", "golden", "simo"}, "");
        std::vector<std::pair<std::string, std::vector<DiffTriple>>> spectra;
        for (const auto &n : names)
        {
            const Scheme s = detail::scheme_of(n, "schemes");
            spectra.emplace_back(std::string(to_string(s)), difference_spectrum(make_codebook(s)));
        }
        const auto mus = detail::range_or_list(cfg, "mu", {}, "");
        std::vector<double> grid = mus;
        if (grid.empty())
            for (int i = 0; i <= 100; ++i)
                grid.push_back(0.01 * i);
        for (double m : grid)
            if (m < 0.0 || m > 1.0 + 1e-12)
                throw config_error("field 'mu': values must lie in [0, 1].");

        std::ostringstream csv;
        csv << "mu";
        for (const auto &s : spectra)
            csv << ',' << s.first;
        csv << '\n';
        for (double m : grid)
        {
            const double mu = std::min(1.0, m);
            csv << detail::num(mu);
            for (const auto &s : spectra)
                csv << ',' << detail::num(coding_gain(s.second, mu));
            csv << '\n';
        }
        detail::write_text(run.record(run.path("coding_gain.csv")), csv.str());
        detail::write_text(run.record(run.path("plot_coding_gain.py")), gain_plot_script());
    }

    // Runs one subcommand; always leaves a manifest behind when the output
    // directory could be created.
    inline int dispatch(const Options &o)
    {
        std::optional<Run> run;
        int code = exit_ok;
        std::string message;
        try
        {
            run.emplace(o);
            if (o.command == "simulate")
                cmd_simulate(*run);
            else if (o.command == "design")
                cmd_design(*run);
            else if (o.command == "curves")
                cmd_curves(*run);
            else if (o.command == "density")
                cmd_density(*run);
            else if (o.command == "gain")
                cmd_gain(*run);
            else
                throw config_error("Unknown subcommand '" + o.command + "'.");
        }
        catch (const config_error &e)
        {
            code = exit_config, message = e.what();
        }
        catch (const infeasible_design &e)
        {
            code = exit_infeasible, message = e.what();
        }
        catch (const std::exception &e)
        {
            code = exit_runtime, message = e.what();
        }

        if (!message.empty())
            std::cerr << "losmimo " << o.command << ": " << message << "\n";
        if (run)
        {
            try
            {
                run->write_manifest(code, message);
            }
            catch (const std::exception &e)
            {
                std::cerr << "losmimo: cannot write manifest: " << e.what() << "\n";
                if (code == exit_ok)
                    code = exit_runtime;
            }
        }
        return code;
    }
}

#endif
