#include "outval/report.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>

#include <fmt/format.h>

#include "outval/csv.hpp"
#include "outval/digest.hpp"
#include "outval/error.hpp"

namespace outval
{

using nlohmann::json;

namespace
{
void write_file(std::filesystem::path const& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::string read_file(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw IngestError(fmt::format("cannot open '{}'", path.string()));
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json read_json(std::filesystem::path const& path)
{
    try
    {
        return json::parse(read_file(path));
    }
    catch (json::exception const& e)
    {
        throw IngestError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

double nearest_rank(std::vector<double> const& sorted, double p)
{
    auto r = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(sorted.size())));
    return sorted[std::clamp<std::size_t>(r, 1, sorted.size()) - 1];
}

json stats_json(ComponentStats const& s)
{
    return {{"mean", s.mean}, {"std", s.std}, {"p5", s.p5}, {"p50", s.p50},
            {"p95", s.p95},   {"min", s.min}, {"max", s.max}};
}

std::string exposure_csv(ScenarioBundle const& b)
{
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "building_id,timestamp,t_in_c,powered,hvac_kw\n");
    for (auto const& tr : b.traces)
    {
        for (std::size_t i = 0; i < tr.size(); ++i)
        {
            auto const t = tr.start + std::chrono::seconds(tr.dt * static_cast<long long>(i));
            fmt::format_to(std::back_inserter(buf), "{},{},{:.6f},{},{:.4f}\n", tr.building_id, format_iso8601(t),
                           tr.t_in[i], tr.powered[i] ? 1 : 0, tr.hvac_electric_kw[i]);
        }
    }
    return {buf.data(), buf.size()};
}

std::string buildings_csv(ScenarioBundle const& b)
{
    std::string out = "building_id,class,sector,insulation,n_occupants,n_workers,unpowered_hours,"
                      "max_contiguous_off_h,mean_t_in,min_t_in,mean_rr,p_mort,sum_wi,c_prod,c_cic,heating_kwh\n";
    for (std::size_t i = 0; i < b.pop.buildings.size(); ++i)
    {
        auto const& bl = b.pop.buildings[i];
        auto const& tr = b.traces[i];
        double sum = 0.0;
        for (double t : tr.t_in)
        {
            sum += t;
        }
        double const min_t = *std::min_element(tr.t_in.begin(), tr.t_in.end());
        out += fmt::format("{},{},{},{},{},{},{},{},{:.6f},{:.6f},{:.9f},{:.9f},{:.6f},{:.2f},{:.2f},{:.4f}\n", bl.id,
                           to_string(bl.cls.kind), to_string(bl.cls.sector), to_string(bl.insulation),
                           bl.n_occupants, bl.n_workers, unpowered_hours(tr.powered, tr.dt),
                           max_contiguous_off(tr.powered, tr.dt), sum / static_cast<double>(tr.size()), min_t,
                           b.mean_rr[i], b.p_mort[i], b.sum_wi[i], b.prod_cost[i], b.cic_cost[i],
                           tr.heating_energy_kwh);
    }
    return out;
}
}  // namespace

WeatherSeries prepare_weather(ScenarioConfig const& cfg)
{
    auto raw = load_weather_csv(cfg.weather_file);
    try
    {
        if (raw.dt != cfg.dt)
        {
            raw = resample(raw, cfg.dt);
        }
        return slice_window(raw, cfg.window.start, cfg.window.end);
    }
    catch (RangeError const& e)
    {
        throw ConfigError(fmt::format("{}: {}", cfg.weather_file.string(), e.what()));
    }
}

Population prepare_population(ScenarioConfig const& cfg)
{
    Population pop = cfg.population_file ? load_population(*cfg.population_file)
                                         : synthesize_population(cfg.population_spec, cfg.population_seed);
    auto const violations = validate_population(pop);
    if (!violations.empty())
    {
        auto const& v = violations.front();
        throw ConfigError(fmt::format("population: {} invalid field(s); first: building {} field '{}': {}",
                                      violations.size(), v.building_id, v.field, v.message));
    }
    return pop;
}

PowerScheduleSet build_schedule(ScenarioConfig const& cfg, Scenario scenario, Population const& pop)
{
    switch (scenario)
    {
    case Scenario::base:
        return build_base_schedule(pop, cfg.window, cfg.dt);
    case Scenario::co:
    {
        std::set<BuildingId> shed;
        if (cfg.shed_ids)
        {
            shed.insert(cfg.shed_ids->begin(), cfg.shed_ids->end());
        }
        else
        {
            shed = sample_shed_set(pop, cfg.shed_fraction, cfg.outage_seed);
        }
        return build_controlled_outage(pop, cfg.window, cfg.dt, shed, cfg.fault_fraction, cfg.outage_seed);
    }
    case Scenario::ro_di:
    case Scenario::ro_hi:
        return build_rolling_outage(pop, cfg.window, cfg.dt, cfg.n_groups, cfg.availability,
                                    scenario == Scenario::ro_hi, cfg.fault_fraction, cfg.outage_seed);
    }
    throw ConfigError("unknown scenario");
}

double auto_beta_wi(ScenarioConfig const& cfg, Population const& pop, WeatherSeries const& weather)
{
    double best = 0.0;
    for (auto sc : {Scenario::base, Scenario::co, Scenario::ro_di, Scenario::ro_hi})
    {
        auto const sched = build_schedule(cfg, sc, pop);
        auto const traces = simulate_population(pop, weather, sched, cfg.thermal, cfg.threads);
        for (auto const& tr : traces)
        {
            best = std::max(best, winter_index(tr, weather.rh_out, cfg.hazard.wi));
        }
    }
    return best > 0.0 ? best : 1.0;
}

RunResult execute(ScenarioConfig const& cfg)
{
    auto const weather = prepare_weather(cfg);
    auto pop = prepare_population(cfg);
    auto sched = build_schedule(cfg, cfg.scenario, pop);
    double const beta = cfg.beta_wi ? *cfg.beta_wi : auto_beta_wi(cfg, pop, weather);

    RunResult r;
    r.population_hash = sha256_hex(population_to_csv(pop));
    r.config_hash = config_hash(cfg);
    r.bundle = prepare_bundle(std::move(pop), weather, std::move(sched), cfg.hazard, cfg.valuation, beta,
                              cfg.thermal, cfg.threads);
    r.trials = run_monte_carlo(r.bundle, cfg.trials, cfg.seed, cfg.threads);
    r.summary = summarize(r.trials, cfg.histogram_bins);

    double all = 0.0;
    double res = 0.0;
    std::size_t n_res = 0;
    auto const& buildings = r.bundle.pop.buildings;
    for (std::size_t i = 0; i < buildings.size(); ++i)
    {
        all += r.bundle.mean_rr[i];
        if (buildings[i].residential())
        {
            res += r.bundle.mean_rr[i];
            ++n_res;
        }
    }
    r.mean_rr = all / static_cast<double>(buildings.size());
    r.mean_rr_residential = n_res ? res / static_cast<double>(n_res) : 1.0;
    return r;
}

RunResult run_scenario(ScenarioConfig const& cfg)
{
    auto const t0 = std::chrono::steady_clock::now();
    auto r = execute(cfg);
    auto const& dir = cfg.output_dir;
    std::filesystem::create_directories(dir);

    json summary;
    summary["scenario"] = std::string(to_string(cfg.scenario));
    summary["n_trials"] = r.summary.n_trials;
    summary["seed"] = cfg.seed;
    summary["beta_wi"] = r.bundle.beta_wi;
    summary["n_buildings"] = r.bundle.pop.buildings.size();
    summary["n_isolated"] = r.bundle.schedules.isolated_ids.size();
    summary["mean_rr"] = r.mean_rr;
    summary["mean_rr_residential"] = r.mean_rr_residential;
    json comps = json::object();
    for (auto const& [name, stats] : r.summary.components)
    {
        comps[name] = stats_json(stats);
    }
    summary["components"] = comps;

    std::map<std::string, std::string> outputs{
        {"trials.csv", trials_to_csv(r.trials)},
        {"summary.json", summary.dump(2) + "\n"},
        {"histogram.csv", histogram_to_csv(r.summary.total_histogram)},
        {"schedules.csv", schedules_to_csv(r.bundle.schedules)},
        {"population.csv", population_to_csv(r.bundle.pop)},
        {"buildings.csv", buildings_csv(r.bundle)},
        {"config.resolved.json", to_json(cfg).dump(2) + "\n"},
    };
    if (cfg.write_traces)
    {
        outputs.emplace("exposure.csv", exposure_csv(r.bundle));
    }
    json digests = json::object();
    for (auto const& [name, content] : outputs)
    {
        write_file(dir / name, content);
        if (name != "config.resolved.json")
        {
            digests[name] = sha256_hex(content);
        }
    }

    auto const& rr = cfg.hazard.rr;
    json rr_json{{"coefficients", rr.a},
                 {"t_min", rr.t_min},
                 {"t_max", rr.t_max},
                 {"normalization", rr.normalization},
                 {"fit_rms_residual", rr.fit_rms_residual},
                 {"grid_minimum", rr.grid_minimum()}};
    json pts = json::array();
    for (auto const& [t, v] : rr.fit_points)
    {
        pts.push_back({t, v});
    }
    rr_json["fit_points"] = pts;

    json inputs{{"weather", {{"path", cfg.weather_file.string()}, {"sha256", sha256_file(cfg.weather_file)}}}};
    if (cfg.population_file)
    {
        inputs["population"] = {{"path", cfg.population_file->string()},
                                {"sha256", sha256_file(*cfg.population_file)}};
    }

    json manifest;
    manifest["config_hash"] = r.config_hash;
    manifest["engine_version"] = OUTVAL_VERSION;
    manifest["seed"] = cfg.seed;
    manifest["scenario"] = std::string(to_string(cfg.scenario));
    manifest["population_hash"] = r.population_hash;
    manifest["inputs"] = inputs;
    manifest["outputs"] = digests;
    manifest["rr_model"] = rr_json;
    manifest["productivity_model"] = {{"coefficients", cfg.hazard.productivity.d},
                                      {"t_min", cfg.hazard.productivity.t_min},
                                      {"t_max", cfg.hazard.productivity.t_max},
                                      {"scale", cfg.hazard.productivity.scale}};
    manifest["beta_wi"] = {{"mode", cfg.beta_wi ? "constant" : "auto"}, {"value", r.bundle.beta_wi}};
    manifest["threads"] = cfg.threads;
    manifest["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    manifest["finished_at"] =
        format_iso8601(std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()));
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
    return r;
}

ComparisonRow const& Comparison::row(std::string_view metric) const
{
    for (auto const& r : rows)
    {
        if (r.metric == metric)
        {
            return r;
        }
    }
    throw std::invalid_argument(fmt::format("no comparison row '{}'", metric));
}

Comparison compare_scenarios(std::vector<std::filesystem::path> const& run_dirs)
{
    if (run_dirs.size() < 2)
    {
        throw ConfigError("compare needs at least two run directories");
    }
    static constexpr std::array<std::string_view, 7> kCostRows{"c_vsl", "c_medical", "c_prod", "c_build",
                                                               "c_cic", "nei",       "total"};
    Comparison c;
    std::string pop_hash;
    std::map<std::string, int> seen_labels;
    std::vector<json> summaries;
    for (auto const& dir : run_dirs)
    {
        auto const summary = read_json(dir / "summary.json");
        auto const manifest = read_json(dir / "manifest.json");
        auto const hash = manifest.value("population_hash", std::string{});
        if (pop_hash.empty())
        {
            pop_hash = hash;
        }
        else if (hash != pop_hash)
        {
            throw ConfigError(fmt::format("'{}' was run on a different population (hash {} vs {})", dir.string(),
                                          hash.substr(0, 12), pop_hash.substr(0, 12)));
        }
        std::string label = summary.value("scenario", dir.filename().string());
        int const n = ++seen_labels[label];
        if (n > 1)
        {
            label += fmt::format("#{}", n);
        }
        c.labels.push_back(label);
        summaries.push_back(summary);
    }

    auto add_row = [&](std::string metric, auto getter) {
        ComparisonRow row;
        row.metric = std::move(metric);
        for (auto const& s : summaries)
        {
            try
            {
                row.values.push_back(getter(s));
            }
            catch (json::exception const& e)
            {
                throw IngestError(fmt::format("summary.json lacks '{}': {}", row.metric, e.what()));
            }
        }
        double const ref = row.values.front();
        for (double v : row.values)
        {
            row.delta_pct.push_back(ref == 0.0 ? (v == 0.0 ? 0.0 : std::numeric_limits<double>::infinity())
                                               : 100.0 * (v - ref) / ref);
        }
        c.rows.push_back(std::move(row));
    };
    for (auto name : kCostRows)
    {
        add_row(std::string(name),
                [&](json const& s) { return s.at("components").at(std::string(name)).at("mean").get<double>(); });
    }
    add_row("mean_rr", [](json const& s) { return s.at("mean_rr").get<double>(); });
    add_row("n_death", [](json const& s) { return s.at("components").at("n_death").at("mean").get<double>(); });
    return c;
}

std::string comparison_to_csv(Comparison const& c)
{
    std::string out = "metric";
    for (auto const& l : c.labels)
    {
        out += "," + l;
    }
    for (std::size_t i = 1; i < c.labels.size(); ++i)
    {
        out += fmt::format(",delta_pct_{}", c.labels[i]);
    }
    out += "\n";
    for (auto const& r : c.rows)
    {
        out += r.metric;
        for (double v : r.values)
        {
            out += fmt::format(",{:.6f}", v);
        }
        for (std::size_t i = 1; i < r.delta_pct.size(); ++i)
        {
            out += fmt::format(",{:.4f}", r.delta_pct[i]);
        }
        out += "\n";
    }
    return out;
}

std::string comparison_to_text(Comparison const& c)
{
    std::string out = fmt::format("{:<10}", "metric");
    for (auto const& l : c.labels)
    {
        out += fmt::format(" {:>18}", l);
    }
    for (std::size_t i = 1; i < c.labels.size(); ++i)
    {
        out += fmt::format(" {:>12}", "d% " + c.labels[i]);
    }
    out += "\n";
    for (auto const& r : c.rows)
    {
        out += fmt::format("{:<10}", r.metric);
        for (double v : r.values)
        {
            out += fmt::format(" {:>18.2f}", v);
        }
        for (std::size_t i = 1; i < r.delta_pct.size(); ++i)
        {
            out += fmt::format(" {:>11.1f}%", r.delta_pct[i]);
        }
        out += "\n";
    }
    return out;
}

std::vector<BuildingExposure> building_exposure(Population const& pop, std::vector<ExposureTrace> const& traces,
                                                RRModel const& rr)
{
    std::vector<BuildingExposure> out;
    out.reserve(pop.buildings.size());
    for (std::size_t i = 0; i < pop.buildings.size(); ++i)
    {
        auto const& b = pop.buildings[i];
        auto const& tr = traces.at(i);
        BuildingExposure e{b.id, b.cls.kind, b.insulation, b.residential(), 0.0, tr.t_in.front(), 0.0};
        double rr_sum = 0.0;
        for (double t : tr.t_in)
        {
            e.mean_t_in += t;
            e.min_t_in = std::min(e.min_t_in, t);
            rr_sum += rr(t);
        }
        e.mean_t_in /= static_cast<double>(tr.size());
        e.mean_rr = rr_sum / static_cast<double>(tr.size());
        out.push_back(e);
    }
    return out;
}

std::vector<InsulationGroupStats> insulation_groups(std::vector<BuildingExposure> const& buildings)
{
    std::vector<InsulationGroupStats> out;
    for (bool residential_only : {true, false})
    {
        for (std::size_t k = 0; k < kInsulationCount; ++k)
        {
            auto const ins = static_cast<Insulation>(k);
            std::vector<double> means;
            InsulationGroupStats g;
            g.scope = residential_only ? "residential" : "all";
            g.insulation = ins;
            g.min_t_in = std::numeric_limits<double>::infinity();
            double rr_sum = 0.0;
            for (auto const& b : buildings)
            {
                if (b.insulation != ins || (residential_only && !b.residential))
                {
                    continue;
                }
                means.push_back(b.mean_t_in);
                rr_sum += b.mean_rr;
                g.min_t_in = std::min(g.min_t_in, b.min_t_in);
            }
            g.n = means.size();
            if (g.n == 0)
            {
                continue;
            }
            std::sort(means.begin(), means.end());
            double sum = 0.0;
            for (double m : means)
            {
                sum += m;
            }
            g.mean_t_in = sum / static_cast<double>(g.n);
            g.q1_t_in = nearest_rank(means, 25.0);
            g.median_t_in = nearest_rank(means, 50.0);
            g.q3_t_in = nearest_rank(means, 75.0);
            g.mean_rr = rr_sum / static_cast<double>(g.n);
            out.push_back(g);
        }
    }
    return out;
}

ExposureReport export_exposure(std::filesystem::path const& run_dir)
{
    auto const exposure_path = run_dir / "exposure.csv";
    if (!std::filesystem::exists(exposure_path))
    {
        throw IngestError(fmt::format("'{}' not found; rerun with output.write_traces enabled",
                                      exposure_path.string()));
    }
    auto const cfg_json = read_json(run_dir / "config.resolved.json");
    auto const cfg = parse_config(cfg_json, run_dir, (run_dir / "config.resolved.json").string());
    auto const pop = load_population(run_dir / "population.csv");

    std::map<BuildingId, std::size_t> index;
    for (std::size_t i = 0; i < pop.buildings.size(); ++i)
    {
        index.emplace(pop.buildings[i].id, i);
    }
    struct Acc
    {
        double sum = 0.0;
        double rr_sum = 0.0;
        double min = std::numeric_limits<double>::infinity();
        std::size_t n = 0;
    };
    std::vector<Acc> acc(pop.buildings.size());

    // Streamed: the file holds one row per building per step.
    std::ifstream in(exposure_path, std::ios::binary);
    std::string line;
    std::size_t line_no = 0;
    std::string const source = exposure_path.string();
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
        {
            line.pop_back();
        }
        if (line_no == 1)
        {
            if (line != "building_id,timestamp,t_in_c,powered,hvac_kw")
            {
                throw IngestError(fmt::format("{}: unexpected header '{}'", source, line));
            }
            continue;
        }
        if (line.empty())
        {
            continue;
        }
        auto const fields = split_csv_line(line);
        if (fields.size() != 5)
        {
            throw IngestError(fmt::format("{}: row {}: expected 5 fields", source, line_no));
        }
        auto const id = parse_int_field(fields[0], source, line_no, "building_id");
        auto it = index.find(id);
        if (it == index.end())
        {
            throw IngestError(fmt::format("{}: row {} column 'building_id': unknown building {}", source, line_no, id));
        }
        double const t = parse_double_field(fields[2], source, line_no, "t_in_c");
        auto& a = acc[it->second];
        a.sum += t;
        a.rr_sum += cfg.hazard.rr(t);
        a.min = std::min(a.min, t);
        ++a.n;
    }

    ExposureReport report;
    for (std::size_t i = 0; i < pop.buildings.size(); ++i)
    {
        auto const& b = pop.buildings[i];
        if (acc[i].n == 0)
        {
            throw IngestError(fmt::format("{}: no trace rows for building {}", source, b.id));
        }
        auto const n = static_cast<double>(acc[i].n);
        report.buildings.push_back(
            {b.id, b.cls.kind, b.insulation, b.residential(), acc[i].sum / n, acc[i].min, acc[i].rr_sum / n});
    }
    report.groups = insulation_groups(report.buildings);

    std::string per_building = "building_id,class,insulation,mean_t_in,min_t_in,mean_rr\n";
    for (auto const& e : report.buildings)
    {
        per_building += fmt::format("{},{},{},{:.6f},{:.6f},{:.9f}\n", e.id, to_string(e.kind),
                                    to_string(e.insulation), e.mean_t_in, e.min_t_in, e.mean_rr);
    }
    write_file(run_dir / "exposure_summary.csv", per_building);

    std::string groups = "scope,insulation,n,mean_t_in,q1_t_in,median_t_in,q3_t_in,min_t_in,mean_rr\n";
    for (auto const& g : report.groups)
    {
        groups += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.9f}\n", g.scope,
                              to_string(g.insulation), g.n, g.mean_t_in, g.q1_t_in, g.median_t_in, g.q3_t_in,
                              g.min_t_in, g.mean_rr);
    }
    write_file(run_dir / "insulation_summary.csv", groups);
    return report;
}

}  // namespace outval
