#include "outval/config.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "outval/digest.hpp"
#include "outval/error.hpp"

namespace outval
{

using nlohmann::json;

namespace
{
constexpr std::array<std::string_view, kConditionCount> kConditionNames{"cardiac", "respiratory",
                                                                        "hypothermia_frost"};

// A JSON object being read: records which keys were consumed so typos in
// the config surface as errors instead of silently falling back to defaults.
class Section
{
  public:
    Section(json const& j, std::string path, std::string const& source) : j_(j), path_(std::move(path)), src_(source)
    {
        if (!j_.is_object())
        {
            fail("", "expected an object");
        }
    }

    [[noreturn]] void fail(std::string_view key, std::string_view what) const
    {
        throw ConfigError(fmt::format("{}: field '{}': {}", src_, field(key), what));
    }

    std::string field(std::string_view key) const
    {
        if (key.empty())
        {
            return path_.empty() ? std::string("<root>") : path_;
        }
        return path_.empty() ? std::string(key) : fmt::format("{}.{}", path_, key);
    }

    bool has(std::string const& key)
    {
        seen_.insert(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }

    json const& raw(std::string const& key)
    {
        seen_.insert(key);
        return j_.at(key);
    }

    Section sub(std::string const& key)
    {
        seen_.insert(key);
        return Section(j_.at(key), field(key), src_);
    }

    double number(std::string const& key, double def)
    {
        if (!has(key))
        {
            return def;
        }
        auto const& v = j_.at(key);
        if (!v.is_number())
        {
            fail(key, "expected a number");
        }
        return v.get<double>();
    }

    long long integer(std::string const& key, long long def)
    {
        if (!has(key))
        {
            return def;
        }
        auto const& v = j_.at(key);
        if (!v.is_number_integer())
        {
            fail(key, "expected an integer");
        }
        return v.get<long long>();
    }

    std::uint64_t unsigned_integer(std::string const& key, std::uint64_t def)
    {
        if (!has(key))
        {
            return def;
        }
        auto const& v = j_.at(key);
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<long long>() < 0))
        {
            fail(key, "expected a non-negative integer");
        }
        return v.get<std::uint64_t>();
    }

    bool boolean(std::string const& key, bool def)
    {
        if (!has(key))
        {
            return def;
        }
        auto const& v = j_.at(key);
        if (!v.is_boolean())
        {
            fail(key, "expected true or false");
        }
        return v.get<bool>();
    }

    std::string string(std::string const& key, std::string def)
    {
        if (!has(key))
        {
            return def;
        }
        auto const& v = j_.at(key);
        if (!v.is_string())
        {
            fail(key, "expected a string");
        }
        return v.get<std::string>();
    }

    std::vector<double> numbers(std::string const& key, std::vector<double> def)
    {
        if (!has(key))
        {
            return def;
        }
        auto const& v = j_.at(key);
        if (!v.is_array())
        {
            fail(key, "expected an array of numbers");
        }
        std::vector<double> out;
        for (auto const& x : v)
        {
            if (!x.is_number())
            {
                fail(key, "expected an array of numbers");
            }
            out.push_back(x.get<double>());
        }
        return out;
    }

    template <std::size_t N>
    std::array<double, N> fixed_numbers(std::string const& key, std::array<double, N> def)
    {
        if (!has(key))
        {
            return def;
        }
        auto v = numbers(key, {});
        if (v.size() != N)
        {
            fail(key, fmt::format("expected {} numbers", N));
        }
        std::array<double, N> out{};
        std::copy(v.begin(), v.end(), out.begin());
        return out;
    }

    std::vector<std::string> keys() const
    {
        std::vector<std::string> out;
        for (auto it = j_.begin(); it != j_.end(); ++it)
        {
            out.push_back(it.key());
        }
        return out;
    }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
        {
            if (!seen_.contains(it.key()))
            {
                fail(it.key(), "unknown field");
            }
        }
    }

  private:
    json const& j_;
    std::string path_;
    std::string const& src_;
    std::set<std::string> seen_;
};

BuildingKind kind_key(Section const& s, std::string const& key)
{
    auto k = building_kind_from_string(key);
    if (!k)
    {
        s.fail(key, "unknown building kind");
    }
    return *k;
}

std::filesystem::path resolve(std::filesystem::path const& base, std::string const& p)
{
    std::filesystem::path path(p);
    return path.is_absolute() ? path : (base / path).lexically_normal();
}

CostRange read_range(Section& s, std::string const& key, CostRange def)
{
    auto v = s.fixed_numbers<2>(key, {def.min, def.max});
    return {v[0], v[1]};
}

TruncNormalParams read_tn(Section& parent, std::string const& key, TruncNormalParams def)
{
    if (!parent.has(key))
    {
        return def;
    }
    auto s = parent.sub(key);
    TruncNormalParams p;
    p.mean = s.number("mean", def.mean);
    p.std = s.number("std", def.std);
    p.min = s.number("min", def.min);
    p.max = s.number("max", def.max);
    s.finish();
    return p;
}

std::array<TruncNormalParams, kConditionCount> read_tn_by_condition(
    Section& parent, std::string const& key, std::array<TruncNormalParams, kConditionCount> def)
{
    if (!parent.has(key))
    {
        return def;
    }
    auto s = parent.sub(key);
    for (std::size_t c = 0; c < kConditionCount; ++c)
    {
        def[c] = read_tn(s, std::string(kConditionNames[c]), def[c]);
    }
    s.finish();
    return def;
}

std::array<CostRange, kConditionCount> read_range_by_condition(Section& parent, std::string const& key,
                                                               std::array<CostRange, kConditionCount> def)
{
    if (!parent.has(key))
    {
        return def;
    }
    auto s = parent.sub(key);
    for (std::size_t c = 0; c < kConditionCount; ++c)
    {
        def[c] = read_range(s, std::string(kConditionNames[c]), def[c]);
    }
    s.finish();
    return def;
}

void read_population_spec(Section& s, PopulationSpec& spec)
{
    if (s.has("counts"))
    {
        auto c = s.sub("counts");
        spec.counts.clear();
        for (auto const& key : c.keys())
        {
            auto const n = c.integer(key, 0);
            if (n < 0)
            {
                c.fail(key, "count must be non-negative");
            }
            spec.counts[kind_key(c, key)] = static_cast<int>(n);
        }
        c.finish();
    }
    spec.insulation_weights = s.fixed_numbers<kInsulationCount>("insulation_weights", spec.insulation_weights);
    if (s.has("insulation_table"))
    {
        auto const& t = s.raw("insulation_table");
        if (!t.is_array() || t.size() != kInsulationCount)
        {
            s.fail("insulation_table", "expected 7 rows of [ua_per_m2, c_per_m2]");
        }
        for (std::size_t i = 0; i < kInsulationCount; ++i)
        {
            auto const& row = t[i];
            if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number())
            {
                s.fail("insulation_table", "expected 7 rows of [ua_per_m2, c_per_m2]");
            }
            spec.insulation_table[i] = {row[0].get<double>(), row[1].get<double>()};
        }
    }
    spec.occupant_weights = s.numbers("occupant_weights", spec.occupant_weights);
    spec.residential_worker_prob = s.number("residential_worker_prob", spec.residential_worker_prob);
    spec.residential_job_power_prob = s.number("residential_job_power_prob", spec.residential_job_power_prob);
    spec.commercial_job_power_prob = s.number("commercial_job_power_prob", spec.commercial_job_power_prob);
    spec.electric_heat_prob = s.number("electric_heat_prob", spec.electric_heat_prob);
    spec.backup_prob = s.number("backup_prob", spec.backup_prob);
    spec.setpoint = s.number("setpoint", spec.setpoint);
    spec.deadband = s.number("deadband", spec.deadband);
    spec.hvac_design_outdoor_c = s.number("hvac_design_outdoor_c", spec.hvac_design_outdoor_c);
    spec.hvac_oversizing = s.number("hvac_oversizing", spec.hvac_oversizing);
    spec.residential_kwh_per_m2 = s.number("residential_kwh_per_m2", spec.residential_kwh_per_m2);
    spec.commercial_kwh_per_m2 = s.number("commercial_kwh_per_m2", spec.commercial_kwh_per_m2);
    auto spread = s.fixed_numbers<2>("kwh_spread", {spec.kwh_spread.lo, spec.kwh_spread.hi});
    spec.kwh_spread = {spread[0], spread[1]};
    if (s.has("floor_area"))
    {
        auto f = s.sub("floor_area");
        for (auto const& key : f.keys())
        {
            auto v = f.fixed_numbers<2>(key, {});
            spec.floor_area[kind_key(f, key)] = {v[0], v[1]};
        }
        f.finish();
    }
    if (s.has("workers_per_100m2"))
    {
        auto w = s.sub("workers_per_100m2");
        for (auto const& key : w.keys())
        {
            spec.workers_per_100m2[kind_key(w, key)] = w.number(key, 0.0);
        }
        w.finish();
    }
    if (s.has("ci_sector"))
    {
        auto m = s.sub("ci_sector");
        for (auto const& key : m.keys())
        {
            auto sector = sector_from_string(m.string(key, ""));
            if (!sector)
            {
                m.fail(key, "unknown sector");
            }
            spec.ci_sector[kind_key(m, key)] = *sector;
        }
        m.finish();
    }
    auto bracket = income_bracket_from_string(s.string("income_bracket", std::string(to_string(spec.income_bracket))));
    if (!bracket)
    {
        s.fail("income_bracket", "unknown income bracket");
    }
    spec.income_bracket = *bracket;
    spec.fill_kind_defaults();
}

void read_hazard(Section& s, HazardConfig& h)
{
    h.delta = s.number("delta", h.delta);
    auto const window = s.string("rr_window", "whole_event");
    if (window == "whole_event")
    {
        h.rr_window = RRWindow::whole_event;
    }
    else if (window == "unpowered_only")
    {
        h.rr_window = RRWindow::unpowered_only;
    }
    else
    {
        s.fail("rr_window", "expected 'whole_event' or 'unpowered_only'");
    }

    if (s.has("rr"))
    {
        auto r = s.sub("rr");
        double const t_min = r.number("t_min", h.rr.t_min);
        double const t_max = r.number("t_max", h.rr.t_max);
        if (r.has("fit_points"))
        {
            auto const& pts = r.raw("fit_points");
            std::vector<std::pair<double, double>> points;
            if (!pts.is_array())
            {
                r.fail("fit_points", "expected an array of [temperature, rr] pairs");
            }
            for (auto const& p : pts)
            {
                if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                {
                    r.fail("fit_points", "expected an array of [temperature, rr] pairs");
                }
                points.emplace_back(p[0].get<double>(), p[1].get<double>());
            }
            h.rr = RRModel::fit(std::move(points), t_min, t_max);
            r.has("coefficients");
        }
        else if (r.has("coefficients"))
        {
            RRModel m;
            m.a = r.fixed_numbers<5>("coefficients", {});
            m.t_min = t_min;
            m.t_max = t_max;
            h.rr = m;
        }
        else
        {
            h.rr = RRModel::fit(RRModel::default_fit_points(), t_min, t_max);
        }
        r.finish();
    }
    if (s.has("productivity"))
    {
        auto p = s.sub("productivity");
        h.productivity.d = p.fixed_numbers<4>("coefficients", h.productivity.d);
        h.productivity.t_min = p.number("t_min", h.productivity.t_min);
        h.productivity.t_max = p.number("t_max", h.productivity.t_max);
        h.productivity.normalize();
        p.finish();
    }
    if (s.has("winter_index"))
    {
        auto w = s.sub("winter_index");
        h.wi.t_crit = w.number("t_crit", h.wi.t_crit);
        h.wi.rh_crit = w.number("rh_crit", h.wi.rh_crit);
        if (w.has("indoor_rh"))
        {
            h.wi.indoor_rh = w.number("indoor_rh", 0.0);
        }
        w.finish();
    }
    if (s.has("distributions"))
    {
        auto d = s.sub("distributions");
        h.pre_cardiac = read_tn(d, "pre_cardiac", h.pre_cardiac);
        h.pre_respiratory = read_tn(d, "pre_respiratory", h.pre_respiratory);
        h.access = read_tn(d, "healthcare_access", h.access);
        h.hospital_survival = read_tn_by_condition(d, "hospital_survival", h.hospital_survival);
        h.home_survival = read_tn_by_condition(d, "home_survival", h.home_survival);
        h.health_insurance = read_tn(d, "health_insurance", h.health_insurance);
        h.home_insurance = read_tn(d, "home_insurance", h.home_insurance);
        d.finish();
    }
}

void read_cic(Section& s, CICParams& c, bool& acknowledged)
{
    acknowledged = s.boolean("acknowledge_placeholder", false);
    bool custom_tables = false;
    if (s.has("sectors"))
    {
        custom_tables = true;
        auto t = s.sub("sectors");
        for (auto const& key : t.keys())
        {
            auto sector = sector_from_string(key);
            if (!sector)
            {
                t.fail(key, "unknown sector");
            }
            auto row = t.sub(key);
            CICSectorCoeffs coeffs;
            coeffs.base = row.number("base", 0.0);
            coeffs.per_hour = row.number("per_hour", 0.0);
            coeffs.per_kwh = row.number("per_kwh", 0.0);
            coeffs.slope = row.number("slope", 0.0);
            row.finish();
            c.sectors[*sector] = coeffs;
        }
        t.finish();
    }
    c.season_multiplier = s.number("season_multiplier", c.season_multiplier);
    c.backup_discount = s.number("backup_discount", c.backup_discount);
    c.cap_hours = s.number("cap_hours", c.cap_hours);
    if (s.has("industry_multiplier"))
    {
        auto m = s.sub("industry_multiplier");
        for (auto const& key : m.keys())
        {
            c.industry_multiplier[kind_key(m, key)] = m.number(key, 1.0);
        }
        m.finish();
    }
    if (s.has("income_multiplier"))
    {
        auto m = s.sub("income_multiplier");
        for (auto const& key : m.keys())
        {
            auto b = income_bracket_from_string(key);
            if (!b)
            {
                m.fail(key, "unknown income bracket");
            }
            c.income_multiplier[*b] = m.number(key, 1.0);
        }
        m.finish();
    }
    if (!custom_tables && !acknowledged)
    {
        s.fail("acknowledge_placeholder",
               "the built-in interruption-cost tables are uncalibrated placeholders; supply 'sectors' or set "
               "this flag to true");
    }
}

void read_valuation(Section& s, ValuationParams& v, std::optional<double>& beta_wi, bool& cic_ack)
{
    if (s.has("vsl"))
    {
        auto const& raw = s.raw("vsl");
        if (raw.is_string())
        {
            auto const preset = raw.get<std::string>();
            if (preset == "fema")
            {
                v.vsl = 11.6e6;
            }
            else if (preset == "dot")
            {
                v.vsl = 11.8e6;
            }
            else
            {
                s.fail("vsl", "expected a number, 'fema' or 'dot'");
            }
        }
        else
        {
            v.vsl = s.number("vsl", v.vsl);
        }
    }
    v.medical_insured = read_range_by_condition(s, "medical_insured", v.medical_insured);
    v.medical_uninsured = read_range_by_condition(s, "medical_uninsured", v.medical_uninsured);
    v.severity_ceiling = s.number("severity_ceiling", v.severity_ceiling);
    v.home_recovery_fraction = s.number("home_recovery_fraction", v.home_recovery_fraction);
    v.pipe_insured = read_range(s, "pipe_insured", v.pipe_insured);
    v.pipe_uninsured = read_range(s, "pipe_uninsured", v.pipe_uninsured);
    if (s.has("wages"))
    {
        auto w = s.sub("wages");
        for (auto const& key : w.keys())
        {
            v.wages[kind_key(w, key)] = w.number(key, 0.0);
        }
        w.finish();
    }
    if (s.has("working_hours"))
    {
        auto w = s.sub("working_hours");
        auto r = w.fixed_numbers<2>("residential", {double(v.residential_hours.start_hour),
                                                    double(v.residential_hours.end_hour)});
        auto c = w.fixed_numbers<2>("commercial", {double(v.commercial_hours.start_hour),
                                                   double(v.commercial_hours.end_hour)});
        v.residential_hours = {static_cast<int>(r[0]), static_cast<int>(r[1])};
        v.commercial_hours = {static_cast<int>(c[0]), static_cast<int>(c[1])};
        w.finish();
    }
    v.utc_offset_hours = static_cast<int>(s.integer("utc_offset_hours", v.utc_offset_hours));
    if (s.has("beta_wi"))
    {
        auto const& raw = s.raw("beta_wi");
        if (raw.is_string() && raw.get<std::string>() == "auto")
        {
            beta_wi.reset();
        }
        else if (raw.is_number())
        {
            beta_wi = raw.get<double>();
            if (!(*beta_wi > 0.0))
            {
                s.fail("beta_wi", "must be positive");
            }
        }
        else
        {
            s.fail("beta_wi", "expected a positive number or 'auto'");
        }
    }
    if (s.has("cic"))
    {
        auto c = s.sub("cic");
        read_cic(c, v.cic, cic_ack);
        c.finish();
    }
    else
    {
        s.fail("cic", "missing; the built-in placeholder tables need 'acknowledge_placeholder': true");
    }
}

json tn_json(TruncNormalParams const& p)
{
    return {{"mean", p.mean}, {"std", p.std}, {"min", p.min}, {"max", p.max}};
}
}  // namespace

ScenarioConfig parse_config(json const& j, std::filesystem::path const& base_dir, std::string const& source_name)
{
    ScenarioConfig cfg;
    Section root(j, "", source_name);
    try
    {
        cfg.seed = root.unsigned_integer("seed", cfg.seed);
        auto const trials = root.integer("trials", cfg.trials);
        if (trials < 1 || trials > std::numeric_limits<std::uint32_t>::max())
        {
            root.fail("trials", "must be at least 1");
        }
        cfg.trials = static_cast<std::uint32_t>(trials);
        auto const threads = root.integer("threads", cfg.threads);
        if (threads < 1)
        {
            root.fail("threads", "must be at least 1");
        }
        cfg.threads = static_cast<unsigned>(threads);
        auto sc = scenario_from_string(root.string("scenario", "base"));
        if (!sc)
        {
            root.fail("scenario", "expected base, co, ro-di or ro-hi");
        }
        cfg.scenario = *sc;

        cfg.population_seed = cfg.seed;
        cfg.population_spec = PopulationSpec::demo();
        if (root.has("population"))
        {
            auto p = root.sub("population");
            if (p.has("file"))
            {
                cfg.population_file = resolve(base_dir, p.string("file", ""));
            }
            cfg.population_seed = p.unsigned_integer("seed", cfg.population_seed);
            read_population_spec(p, cfg.population_spec);
            p.finish();
        }

        if (!root.has("weather"))
        {
            root.fail("weather", "missing");
        }
        {
            auto w = root.sub("weather");
            if (!w.has("file"))
            {
                w.fail("file", "missing");
            }
            cfg.weather_file = resolve(base_dir, w.string("file", ""));
            w.finish();
        }

        if (!root.has("event"))
        {
            root.fail("event", "missing");
        }
        {
            auto e = root.sub("event");
            auto parse_ts = [&](std::string const& key) {
                auto t = parse_iso8601(e.string(key, ""));
                if (!t)
                {
                    e.fail(key, "expected an ISO-8601 timestamp");
                }
                return *t;
            };
            cfg.window.start = parse_ts("start");
            cfg.window.end = parse_ts("end");
            cfg.dt = e.integer("dt_seconds", cfg.dt);
            if (cfg.dt <= 0)
            {
                e.fail("dt_seconds", "must be positive");
            }
            e.finish();
            try
            {
                (void)cfg.window.steps(cfg.dt);
            }
            catch (RangeError const& err)
            {
                e.fail("", err.what());
            }
        }

        cfg.outage_seed = cfg.seed;
        if (root.has("outage"))
        {
            auto o = root.sub("outage");
            cfg.outage_seed = o.unsigned_integer("seed", cfg.outage_seed);
            cfg.fault_fraction = o.number("fault_fraction", cfg.fault_fraction);
            if (!(cfg.fault_fraction >= 0.0 && cfg.fault_fraction < 1.0))
            {
                o.fail("fault_fraction", "must be in [0, 1)");
            }
            if (o.has("shed"))
            {
                auto sh = o.sub("shed");
                if (sh.has("ids"))
                {
                    auto const& ids = sh.raw("ids");
                    if (!ids.is_array())
                    {
                        sh.fail("ids", "expected an array of building ids");
                    }
                    std::vector<BuildingId> v;
                    for (auto const& x : ids)
                    {
                        if (!x.is_number_integer())
                        {
                            sh.fail("ids", "expected an array of building ids");
                        }
                        v.push_back(x.get<BuildingId>());
                    }
                    cfg.shed_ids = std::move(v);
                }
                cfg.shed_fraction = sh.number("fraction", cfg.shed_fraction);
                if (!(cfg.shed_fraction >= 0.0 && cfg.shed_fraction <= 1.0))
                {
                    sh.fail("fraction", "must be in [0, 1]");
                }
                sh.finish();
            }
            cfg.n_groups = static_cast<int>(o.integer("n_groups", cfg.n_groups));
            if (cfg.n_groups < 2)
            {
                o.fail("n_groups", "must be at least 2");
            }
            cfg.availability.slot_hours = o.number("slot_hours", cfg.availability.slot_hours);
            if (o.has("availability"))
            {
                auto const& a = o.raw("availability");
                if (!a.is_array())
                {
                    o.fail("availability", "expected an array of [slot, fraction] pairs");
                }
                std::map<long long, double> slots;
                for (auto const& p : a)
                {
                    if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number())
                    {
                        o.fail("availability", "expected an array of [slot, fraction] pairs");
                    }
                    double const f = p[1].get<double>();
                    if (!(f >= 0.0 && f <= 1.0))
                    {
                        o.fail("availability", fmt::format("fraction {} outside [0, 1]", f));
                    }
                    if (!slots.emplace(p[0].get<long long>(), f).second)
                    {
                        o.fail("availability", fmt::format("slot {} listed twice", p[0].get<long long>()));
                    }
                }
                long long expect = 0;
                for (auto const& [slot, f] : slots)
                {
                    if (slot != expect++)
                    {
                        o.fail("availability", "slots must be 0, 1, 2, ... without gaps");
                    }
                    cfg.availability.fractions.push_back(f);
                }
            }
            o.finish();
        }

        if (root.has("thermal"))
        {
            auto t = root.sub("thermal");
            cfg.thermal.residential_gain_w = t.number("residential_gain_w", cfg.thermal.residential_gain_w);
            cfg.thermal.commercial_gain_w = t.number("commercial_gain_w", cfg.thermal.commercial_gain_w);
            cfg.thermal.gas_blower_kw = t.number("gas_blower_kw", cfg.thermal.gas_blower_kw);
            t.finish();
        }

        if (root.has("hazard"))
        {
            auto h = root.sub("hazard");
            read_hazard(h, cfg.hazard);
            h.finish();
        }
        cfg.hazard.validate();

        if (!root.has("valuation"))
        {
            root.fail("valuation", "missing; the built-in placeholder interruption-cost tables need "
                                   "'valuation.cic.acknowledge_placeholder': true");
        }
        {
            auto v = root.sub("valuation");
            read_valuation(v, cfg.valuation, cfg.beta_wi, cfg.cic_acknowledged);
            v.finish();
        }
        cfg.valuation.validate();

        if (root.has("output"))
        {
            auto o = root.sub("output");
            cfg.output_dir = o.string("dir", cfg.output_dir.string());
            cfg.write_traces = o.boolean("write_traces", cfg.write_traces);
            auto const bins = o.integer("histogram_bins", static_cast<long long>(cfg.histogram_bins));
            if (bins < 1)
            {
                o.fail("histogram_bins", "must be at least 1");
            }
            cfg.histogram_bins = static_cast<std::size_t>(bins);
            o.finish();
        }
        root.finish();
    }
    catch (json::exception const& e)
    {
        throw ConfigError(fmt::format("{}: {}", source_name, e.what()));
    }
    return cfg;
}

ScenarioConfig load_config(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
    }
    json j;
    try
    {
        j = json::parse(in);
    }
    catch (json::parse_error const& e)
    {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()));
    }
    return parse_config(j, path.parent_path(), path.string());
}

json to_json(ScenarioConfig const& cfg)
{
    json j;
    j["seed"] = cfg.seed;
    j["trials"] = cfg.trials;
    j["threads"] = cfg.threads;
    j["scenario"] = std::string(to_string(cfg.scenario));

    auto const& ps = cfg.population_spec;
    json pop;
    if (cfg.population_file)
    {
        pop["file"] = cfg.population_file->string();
    }
    pop["seed"] = cfg.population_seed;
    json counts = json::object();
    for (auto const& [k, n] : ps.counts)
    {
        counts[std::string(to_string(k))] = n;
    }
    pop["counts"] = counts;
    pop["insulation_weights"] = ps.insulation_weights;
    json table = json::array();
    for (auto const& row : ps.insulation_table)
    {
        table.push_back({row.ua_per_m2, row.c_per_m2});
    }
    pop["insulation_table"] = table;
    pop["occupant_weights"] = ps.occupant_weights;
    pop["residential_worker_prob"] = ps.residential_worker_prob;
    pop["residential_job_power_prob"] = ps.residential_job_power_prob;
    pop["commercial_job_power_prob"] = ps.commercial_job_power_prob;
    pop["electric_heat_prob"] = ps.electric_heat_prob;
    pop["backup_prob"] = ps.backup_prob;
    pop["setpoint"] = ps.setpoint;
    pop["deadband"] = ps.deadband;
    pop["hvac_design_outdoor_c"] = ps.hvac_design_outdoor_c;
    pop["hvac_oversizing"] = ps.hvac_oversizing;
    pop["residential_kwh_per_m2"] = ps.residential_kwh_per_m2;
    pop["commercial_kwh_per_m2"] = ps.commercial_kwh_per_m2;
    pop["kwh_spread"] = {ps.kwh_spread.lo, ps.kwh_spread.hi};
    json area = json::object();
    for (auto const& [k, r] : ps.floor_area)
    {
        area[std::string(to_string(k))] = {r.lo, r.hi};
    }
    pop["floor_area"] = area;
    json workers = json::object();
    for (auto const& [k, w] : ps.workers_per_100m2)
    {
        workers[std::string(to_string(k))] = w;
    }
    pop["workers_per_100m2"] = workers;
    json sectors = json::object();
    for (auto const& [k, s] : ps.ci_sector)
    {
        sectors[std::string(to_string(k))] = std::string(to_string(s));
    }
    pop["ci_sector"] = sectors;
    pop["income_bracket"] = std::string(to_string(ps.income_bracket));
    j["population"] = pop;

    j["weather"] = {{"file", cfg.weather_file.string()}};
    j["event"] = {{"start", format_iso8601(cfg.window.start)},
                  {"end", format_iso8601(cfg.window.end)},
                  {"dt_seconds", cfg.dt}};

    json outage;
    outage["seed"] = cfg.outage_seed;
    outage["fault_fraction"] = cfg.fault_fraction;
    json shed;
    if (cfg.shed_ids)
    {
        shed["ids"] = *cfg.shed_ids;
    }
    shed["fraction"] = cfg.shed_fraction;
    outage["shed"] = shed;
    outage["n_groups"] = cfg.n_groups;
    outage["slot_hours"] = cfg.availability.slot_hours;
    json avail = json::array();
    for (std::size_t i = 0; i < cfg.availability.fractions.size(); ++i)
    {
        avail.push_back({i, cfg.availability.fractions[i]});
    }
    outage["availability"] = avail;
    j["outage"] = outage;

    j["thermal"] = {{"residential_gain_w", cfg.thermal.residential_gain_w},
                    {"commercial_gain_w", cfg.thermal.commercial_gain_w},
                    {"gas_blower_kw", cfg.thermal.gas_blower_kw}};

    auto const& h = cfg.hazard;
    json hz;
    hz["delta"] = h.delta;
    hz["rr_window"] = h.rr_window == RRWindow::whole_event ? "whole_event" : "unpowered_only";
    json rr{{"t_min", h.rr.t_min}, {"t_max", h.rr.t_max}};
    if (!h.rr.fit_points.empty())
    {
        json pts = json::array();
        for (auto const& [t, v] : h.rr.fit_points)
        {
            pts.push_back({t, v});
        }
        rr["fit_points"] = pts;
    }
    else
    {
        rr["coefficients"] = h.rr.a;
    }
    hz["rr"] = rr;
    hz["productivity"] = {{"coefficients", h.productivity.d},
                          {"t_min", h.productivity.t_min},
                          {"t_max", h.productivity.t_max}};
    json wi{{"t_crit", h.wi.t_crit}, {"rh_crit", h.wi.rh_crit}};
    wi["indoor_rh"] = h.wi.indoor_rh ? json(*h.wi.indoor_rh) : json(nullptr);
    hz["winter_index"] = wi;
    json dist;
    dist["pre_cardiac"] = tn_json(h.pre_cardiac);
    dist["pre_respiratory"] = tn_json(h.pre_respiratory);
    dist["healthcare_access"] = tn_json(h.access);
    json hosp, home;
    for (std::size_t c = 0; c < kConditionCount; ++c)
    {
        hosp[std::string(kConditionNames[c])] = tn_json(h.hospital_survival[c]);
        home[std::string(kConditionNames[c])] = tn_json(h.home_survival[c]);
    }
    dist["hospital_survival"] = hosp;
    dist["home_survival"] = home;
    dist["health_insurance"] = tn_json(h.health_insurance);
    dist["home_insurance"] = tn_json(h.home_insurance);
    hz["distributions"] = dist;
    j["hazard"] = hz;

    auto const& v = cfg.valuation;
    json val;
    val["vsl"] = v.vsl;
    json mi, mu;
    for (std::size_t c = 0; c < kConditionCount; ++c)
    {
        mi[std::string(kConditionNames[c])] = {v.medical_insured[c].min, v.medical_insured[c].max};
        mu[std::string(kConditionNames[c])] = {v.medical_uninsured[c].min, v.medical_uninsured[c].max};
    }
    val["medical_insured"] = mi;
    val["medical_uninsured"] = mu;
    val["severity_ceiling"] = v.severity_ceiling;
    val["home_recovery_fraction"] = v.home_recovery_fraction;
    val["pipe_insured"] = {v.pipe_insured.min, v.pipe_insured.max};
    val["pipe_uninsured"] = {v.pipe_uninsured.min, v.pipe_uninsured.max};
    json wages = json::object();
    for (auto const& [k, w] : v.wages)
    {
        wages[std::string(to_string(k))] = w;
    }
    val["wages"] = wages;
    val["working_hours"] = {{"residential", {v.residential_hours.start_hour, v.residential_hours.end_hour}},
                            {"commercial", {v.commercial_hours.start_hour, v.commercial_hours.end_hour}}};
    val["utc_offset_hours"] = v.utc_offset_hours;
    val["beta_wi"] = cfg.beta_wi ? json(*cfg.beta_wi) : json("auto");
    json cic;
    cic["acknowledge_placeholder"] = cfg.cic_acknowledged;
    json sec = json::object();
    for (auto const& [s, c] : v.cic.sectors)
    {
        sec[std::string(to_string(s))] = {
            {"base", c.base}, {"per_hour", c.per_hour}, {"per_kwh", c.per_kwh}, {"slope", c.slope}};
    }
    cic["sectors"] = sec;
    cic["season_multiplier"] = v.cic.season_multiplier;
    json ind = json::object();
    for (auto const& [k, m] : v.cic.industry_multiplier)
    {
        ind[std::string(to_string(k))] = m;
    }
    cic["industry_multiplier"] = ind;
    json inc = json::object();
    for (auto const& [b, m] : v.cic.income_multiplier)
    {
        inc[std::string(to_string(b))] = m;
    }
    cic["income_multiplier"] = inc;
    cic["backup_discount"] = v.cic.backup_discount;
    cic["cap_hours"] = v.cic.cap_hours;
    val["cic"] = cic;
    j["valuation"] = val;

    j["output"] = {{"dir", cfg.output_dir.string()},
                   {"write_traces", cfg.write_traces},
                   {"histogram_bins", cfg.histogram_bins}};
    return j;
}

std::string config_hash(ScenarioConfig const& cfg)
{
    json j = to_json(cfg);
    j.erase("threads");
    j["output"].erase("dir");
    j["weather"]["file"] = sha256_file(cfg.weather_file);
    if (cfg.population_file)
    {
        j["population"]["file"] = sha256_file(*cfg.population_file);
    }
    return sha256_hex(j.dump());
}

}  // namespace outval
