#include "outval/cli.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "outval/config.hpp"
#include "outval/error.hpp"
#include "outval/report.hpp"

namespace outval
{

namespace
{
ScenarioConfig load_with_overrides(std::filesystem::path const& path, std::optional<std::string> const& scenario,
                                   std::optional<long long> trials, std::optional<std::uint64_t> seed,
                                   std::optional<std::string> const& out, std::optional<long long> threads)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
    }
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(in);
    }
    catch (nlohmann::json::parse_error const& e)
    {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
    // Overrides are applied to the document so that seeds left implicit in
    // the file follow --seed.
    if (scenario)
    {
        j["scenario"] = *scenario;
    }
    if (trials)
    {
        j["trials"] = *trials;
    }
    if (seed)
    {
        j["seed"] = *seed;
    }
    if (threads)
    {
        j["threads"] = *threads;
    }
    if (out)
    {
        j["output"]["dir"] = *out;
    }
    return parse_config(j, path.parent_path(), path.string());
}
}  // namespace

int cli_main(int argc, char** argv)
{
    CLI::App app{"Outage loss valuation engine"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(OUTVAL_VERSION));

    auto* run = app.add_subcommand("run", "Run one scenario from a config file");
    std::string config_path;
    std::optional<std::string> scenario;
    std::optional<long long> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<long long> threads;
    run->add_option("--config", config_path, "Scenario config (JSON)")->required();
    run->add_option("--scenario", scenario, "base, co, ro-di or ro-hi")
        ->check(CLI::IsMember({"base", "co", "ro-di", "ro-hi"}));
    run->add_option("--trials", trials, "Monte-Carlo trials");
    run->add_option("--seed", seed, "Master seed");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--threads", threads, "Worker threads");

    auto* compare = app.add_subcommand("compare", "Compare finished runs on the same population");
    std::vector<std::string> compare_dirs;
    std::optional<std::string> compare_out;
    compare->add_option("dirs", compare_dirs, "Run directories")->required()->expected(2, -1);
    compare->add_option("--out", compare_out, "Write the comparison CSV here");

    auto* exposure = app.add_subcommand("export-exposure", "Summarize a run's indoor temperatures");
    std::string exposure_dir;
    exposure->add_option("dir", exposure_dir, "Run directory")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try
    {
        if (*run)
        {
            auto const cfg = load_with_overrides(config_path, scenario, trials, seed, out_dir, threads);
            auto const r = run_scenario(cfg);
            auto const& total = r.summary.components.at("total");
            auto const& nei = r.summary.components.at("nei");
            std::cout << fmt::format("{}: {} trials, mean total {:.2f} USD (NEI {:.2f}), mean RR {:.4f}\n",
                                     to_string(cfg.scenario), r.summary.n_trials, total.mean, nei.mean, r.mean_rr);
            std::cout << fmt::format("outputs in {}\n", cfg.output_dir.string());
        }
        else if (*compare)
        {
            std::vector<std::filesystem::path> dirs(compare_dirs.begin(), compare_dirs.end());
            auto const c = compare_scenarios(dirs);
            std::cout << comparison_to_text(c);
            if (compare_out)
            {
                std::ofstream f(*compare_out, std::ios::binary);
                if (!f)
                {
                    throw std::runtime_error(fmt::format("cannot write '{}'", *compare_out));
                }
                f << comparison_to_csv(c);
            }
        }
        else if (*exposure)
        {
            auto const report = export_exposure(exposure_dir);
            for (auto const& g : report.groups)
            {
                std::cout << fmt::format("{:<12} {:<14} n={:<5} mean {:7.2f} C  min {:7.2f} C  RR {:.4f}\n",
                                         g.scope, to_string(g.insulation), g.n, g.mean_t_in, g.min_t_in, g.mean_rr);
            }
        }
    }
    catch (ConfigError const& e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    }
    catch (IngestError const& e)
    {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace outval
