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

#include "cli_app.hpp"

#include "CLI11.hpp"

int main(int argc, char **argv)
{
    using namespace losmimo::cli;

    CLI::App app{"losmimo - line-of-sight MIMO workbench"};
    app.set_version_flag("--version", std::string(version));
    app.require_subcommand(1);

    Options opt;
    std::optional<std::size_t> workers;
    std::string config, out = "out", scheme;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App *sub, bool seeded) {
        sub->add_option("--config", config, "JSON configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", out, "Output directory (created if missing)");
        sub->add_option("--workers", workers, "Worker threads (default: $LOSMIMO_WORKERS or 1)")
            ->check(CLI::PositiveNumber);
        if (seeded)
            sub->add_option("--seed", seed, "Master seed, overrides the config");
    };

    add_common(app.add_subcommand("simulate", "Monte-Carlo BER curves"), true);
    add_common(app.add_subcommand("design", "Distance range for a channel-quality target"), false);
    add_common(app.add_subcommand("curves", "Worst-case correlation curves"), false);
    add_common(app.add_subcommand("density", "Joint density of the correlation phase and magnitude"), true);
    auto *gain = app.add_subcommand("gain", "Coding gain against correlation");
    add_common(gain, false);
    gain->add_option("--scheme", scheme, "Restrict to one scheme (sm, golden, simo)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_config;
    }

    for (auto *sub : app.get_subcommands())
    {
        opt.command = sub->get_name();
        if (!config.empty())
            opt.config = config;
        if (sub->get_option_no_throw("--seed") && sub->count("--seed"))
            opt.seed = seed;
        if (!scheme.empty())
            opt.scheme = scheme;
    }
    opt.out = out;
    try
    {
        opt.workers = resolve_workers(workers);
    }
    catch (const losmimo::config_error &e)
    {
        std::cerr << "losmimo: " << e.what() << "\n";
        return exit_config;
    }
    return dispatch(opt);
}
