#include "outval/hazard.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "outval/error.hpp"

namespace outval
{

namespace
{
double horner(double const* c, std::size_t n, double t)
{
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        v = v * t + c[i];
    }
    return v;
}

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Dense scan for the polynomial minimum; fine enough that the 0.1 degC
// validation grid never lands below it by more than rounding.
template <typename F>
double scan_min(F const& f, double lo, double hi)
{
    constexpr int kSteps = 350000;
    double best = std::min(f(lo), f(hi));
    for (int i = 1; i < kSteps; ++i)
    {
        best = std::min(best, f(lo + (hi - lo) * i / kSteps));
    }
    return best;
}
}  // namespace

double RRModel::operator()(double t) const
{
    return horner(a.data(), a.size(), std::clamp(t, t_min, t_max));
}

RRModel RRModel::fit(std::vector<std::pair<double, double>> points, double t_min, double t_max)
{
    if (points.size() < 5)
    {
        throw ConfigError(fmt::format("rr fit needs at least 5 points (got {})", points.size()));
    }
    if (!(t_min < t_max))
    {
        throw ConfigError("rr valid range must have t_min < t_max");
    }
    Eigen::MatrixXd x(static_cast<Eigen::Index>(points.size()), 5);
    Eigen::VectorXd y(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        auto const r = static_cast<Eigen::Index>(i);
        double const t = points[i].first;
        x.row(r) << t * t * t * t, t * t * t, t * t, t, 1.0;
        y(r) = points[i].second;
    }
    Eigen::VectorXd const c = x.colPivHouseholderQr().solve(y);
    RRModel m;
    m.t_min = t_min;
    m.t_max = t_max;
    for (int i = 0; i < 5; ++i)
    {
        m.a[static_cast<std::size_t>(i)] = c(i);
    }
    m.fit_rms_residual = std::sqrt((x * c - y).squaredNorm() / static_cast<double>(points.size()));
    double const lowest = scan_min([&](double t) { return horner(m.a.data(), 5, t); }, t_min, t_max);
    if (!(lowest > 0.0))
    {
        throw ConfigError(fmt::format("rr fit has non-positive minimum {}", lowest));
    }
    for (double& v : m.a)
    {
        v /= lowest;
    }
    m.normalization = lowest;
    m.fit_points = std::move(points);
    return m;
}

std::vector<std::pair<double, double>> RRModel::default_fit_points()
{
    return {{20.0, 1.0},   {17.0, 1.012}, {14.0, 1.03},  {11.0, 1.055}, {8.0, 1.085},
            {5.0, 1.12},   {2.0, 1.16},   {-1.0, 1.205}, {-4.0, 1.255}, {-7.0, 1.31},
            {-10.0, 1.37}, {-13.0, 1.435}, {-15.0, 1.48}};
}

RRModel RRModel::default_model() { return fit(default_fit_points(), -15.0, 20.0); }

double RRModel::grid_minimum() const
{
    auto const n = static_cast<int>(std::floor((t_max - t_min) / 0.1 + 1e-9));
    double best = (*this)(t_max);
    for (int i = 0; i <= n; ++i)
    {
        best = std::min(best, (*this)(t_min + 0.1 * i));
    }
    return best;
}

void RRModel::validate() const
{
    if (!(t_min < t_max))
    {
        throw ConfigError("rr valid range must have t_min < t_max");
    }
    double const m = grid_minimum();
    if (!(m >= 1.0 - 1e-9 && m <= 1.0 + 1e-6))
    {
        throw ConfigError(fmt::format("rr model minimum over its range is {:.12g}, expected 1", m));
    }
}

double ProductivityModel::raw(double t) const { return horner(d.data(), d.size(), std::clamp(t, t_min, t_max)); }

double ProductivityModel::operator()(double t) const { return std::clamp(raw(t) / scale, 0.0, 1.0); }

void ProductivityModel::normalize()
{
    scale = -scan_min([this](double t) { return -horner(d.data(), d.size(), t); }, t_min, t_max);
    if (!(scale > 0.0))
    {
        throw ConfigError("productivity curve has no positive value on its range");
    }
}

ProductivityModel ProductivityModel::default_model()
{
    ProductivityModel m;
    m.normalize();
    return m;
}

void ProductivityModel::validate() const
{
    if (!(t_min < t_max) || !(scale > 0.0))
    {
        throw ConfigError("productivity model needs t_min < t_max and a positive scale");
    }
    double best = 0.0;
    constexpr int kSteps = 35000;
    for (int i = 0; i <= kSteps; ++i)
    {
        best = std::max(best, raw(t_min + (t_max - t_min) * i / kSteps) / scale);
    }
    if (!(best >= 1.0 - 1e-6 && best <= 1.0 + 1e-12))
    {
        throw ConfigError(fmt::format("productivity maximum over its range is {:.12g}, expected 1", best));
    }
}

double acceptance_probability(TruncNormalParams const& p)
{
    return std_normal_cdf((p.max - p.mean) / p.std) - std_normal_cdf((p.min - p.mean) / p.std);
}

void validate(TruncNormalParams const& p, std::string_view name)
{
    if (!(p.min <= p.max))
    {
        throw ConfigError(fmt::format("{}: min {} exceeds max {}", name, p.min, p.max));
    }
    if (!(p.std > 0.0) || !std::isfinite(p.mean))
    {
        throw ConfigError(fmt::format("{}: std must be positive and mean finite", name));
    }
    double const acc = acceptance_probability(p);
    if (!(acc >= 1e-6))
    {
        throw ConfigError(fmt::format("{}: truncation window [{}, {}] keeps only {:.3g} of the mass", name, p.min,
                                      p.max, acc));
    }
}

double sample_truncated_normal(TruncNormalParams const& p, RandomStream& rng)
{
    for (;;)
    {
        double const x = p.mean + p.std * rng.normal();
        if (x >= p.min && x <= p.max)
        {
            return x;
        }
    }
}

void HazardConfig::validate() const
{
    rr.validate();
    productivity.validate();
    if (!(wi.rh_crit >= 0.0 && wi.rh_crit <= 100.0))
    {
        throw ConfigError(fmt::format("winter index rh_crit {} outside [0, 100]", wi.rh_crit));
    }
    if (wi.indoor_rh && !(*wi.indoor_rh >= 0.0 && *wi.indoor_rh <= 100.0))
    {
        throw ConfigError(fmt::format("winter index indoor_rh {} outside [0, 100]", *wi.indoor_rh));
    }
    if (!std::isfinite(delta))
    {
        throw ConfigError("delta must be finite");
    }
    auto pct = [](TruncNormalParams const& p, std::string_view name) {
        outval::validate(p, name);
        if (p.min < 0.0 || p.max > 100.0)
        {
            throw ConfigError(fmt::format("{}: percentage bounds must lie in [0, 100]", name));
        }
    };
    pct(pre_cardiac, "pre_existing.cardiac");
    pct(pre_respiratory, "pre_existing.respiratory");
    pct(access, "healthcare_access");
    for (std::size_t c = 0; c < kConditionCount; ++c)
    {
        pct(hospital_survival[c], fmt::format("hospital_survival[{}]", c));
        pct(home_survival[c], fmt::format("home_survival[{}]", c));
    }
    pct(health_insurance, "health_insurance");
    pct(home_insurance, "home_insurance");
}

OutcomeProbabilities draw_outcome_probabilities(HazardConfig const& cfg, RandomStream& rng)
{
    OutcomeProbabilities p;
    p.p_pre_c = sample_truncated_normal(cfg.pre_cardiac, rng) / 100.0;
    p.p_pre_r = sample_truncated_normal(cfg.pre_respiratory, rng) / 100.0;
    p.p_access = sample_truncated_normal(cfg.access, rng) / 100.0;
    for (std::size_t c = 0; c < kConditionCount; ++c)
    {
        p.hospital_surv[c] = sample_truncated_normal(cfg.hospital_survival[c], rng) / 100.0;
        p.home_surv[c] = sample_truncated_normal(cfg.home_survival[c], rng) / 100.0;
    }
    p.p_heal_ins = sample_truncated_normal(cfg.health_insurance, rng) / 100.0;
    return p;
}

double relative_risk(double t_in, RRModel const& model) { return model(t_in); }

double productivity(double t_in, ProductivityModel const& model) { return model(t_in); }

double mean_relative_risk(ExposureTrace const& trace, RRModel const& model, RRWindow window)
{
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < trace.size(); ++i)
    {
        if (window == RRWindow::unpowered_only && trace.powered[i])
        {
            continue;
        }
        sum += model(trace.t_in[i]);
        ++n;
    }
    return n == 0 ? 1.0 : sum / static_cast<double>(n);
}

double base_mortality(double mean_rr, double delta) { return std::clamp(mean_rr - 1.0 + delta, 0.0, 1.0); }

double base_mortality(ExposureTrace const& trace, RRModel const& model, double delta, RRWindow window)
{
    return base_mortality(mean_relative_risk(trace, model, window), delta);
}

double winter_index(ExposureTrace const& trace, std::vector<double> const& rh, WinterIndexParams const& params)
{
    if (rh.size() != trace.size())
    {
        throw RangeError(fmt::format("winter index: {} humidity samples for a {}-step trace", rh.size(),
                                     trace.size()));
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i)
    {
        double const h = params.indoor_rh.value_or(rh[i]);
        if (trace.t_in[i] < params.t_crit && h > params.rh_crit)
        {
            sum += (params.t_crit - trace.t_in[i]) * (h - params.rh_crit);
        }
    }
    return sum;
}

OccupantOutcome resolve_at_risk_outcome(OutcomeProbabilities const& probs, RandomStream& rng)
{
    OccupantOutcome out;
    if (rng.bernoulli(probs.p_pre_c))
    {
        out.condition = Condition::cardiac;
    }
    else
    {
        // Conditioning on "not cardiac" keeps the respiratory marginal at p_pre_r.
        double const rest = 1.0 - probs.p_pre_c;
        double const p_r = rest > 0.0 ? std::min(1.0, probs.p_pre_r / rest) : 0.0;
        out.condition = rng.bernoulli(p_r) ? Condition::respiratory : Condition::hypothermia_frost;
    }
    auto const c = static_cast<std::size_t>(out.condition);
    out.accessed_healthcare = rng.bernoulli(probs.p_access);
    double const survival = out.accessed_healthcare ? probs.hospital_surv[c] : probs.home_surv[c];
    if (rng.bernoulli(survival))
    {
        out.status = out.accessed_healthcare ? OutcomeStatus::injured_recovered_hospital
                                             : OutcomeStatus::injured_recovered_home;
    }
    else
    {
        out.status = OutcomeStatus::death;
    }
    out.insured = rng.bernoulli(probs.p_heal_ins);
    return out;
}

OccupantOutcome simulate_occupant_outcome(double p_mort, OutcomeProbabilities const& probs, RandomStream& rng)
{
    if (!rng.bernoulli(p_mort))
    {
        return {};
    }
    return resolve_at_risk_outcome(probs, rng);
}

}  // namespace outval
