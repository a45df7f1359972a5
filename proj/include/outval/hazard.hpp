#pragma once

// Damage functions: mortality relative risk, occupant outcome tree,
// productivity level and the Winter Index for frozen-pipe damage.

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "outval/rng.hpp"
#include "outval/thermal.hpp"

namespace outval
{

/// Quartic a1 T^4 + a2 T^3 + a3 T^2 + a4 T + a5, evaluated on a clamped range
/// and normalized so that its minimum over the range is 1.
struct RRModel
{
    std::array<double, 5> a{};
    double t_min = -15.0;
    double t_max = 20.0;
    // Provenance of a fitted model; empty when coefficients were given directly.
    std::vector<std::pair<double, double>> fit_points;
    double fit_rms_residual = 0.0;
    double normalization = 1.0;  // raw polynomial minimum the fit was divided by

    double operator()(double t) const;

    /// Least-squares quartic through (temperature, RR) points, rescaled so the
    /// minimum over [t_min, t_max] is exactly 1. Throws ConfigError on fewer than
    /// five points or a non-positive minimum.
    static RRModel fit(std::vector<std::pair<double, double>> points, double t_min, double t_max);
    /// Cold limb of a winter temperature-mortality curve for a hot-humid city.
    static RRModel default_model();
    static std::vector<std::pair<double, double>> default_fit_points();

    /// Minimum over a 0.1 degC grid of the valid range.
    double grid_minimum() const;
    /// Throws ConfigError unless the grid minimum lies in [1 - 1e-9, 1 + 1e-6].
    void validate() const;
};

/// Cubic d1 T^3 + d2 T^2 + d3 T + d4 on a clamped range, divided by `scale`
/// (its maximum over the range) and clamped to [0, 1].
struct ProductivityModel
{
    std::array<double, 4> d{0.0000623, -0.0058274, 0.1647524, -0.4685328};
    double t_min = 0.0;
    double t_max = 35.0;
    double scale = 1.0;

    double operator()(double t) const;
    double raw(double t) const;

    /// Sets `scale` to the polynomial's maximum over the valid range.
    void normalize();
    static ProductivityModel default_model();
    /// Throws ConfigError unless the maximum over the range lies in [1 - 1e-6, 1].
    void validate() const;
};

struct WinterIndexParams
{
    double t_crit = 0.0;    // T_L, degC
    double rh_crit = 80.0;  // RH_L, %
    // Constant indoor RH; when unset the outdoor RH is used.
    std::optional<double> indoor_rh;
};

struct TruncNormalParams
{
    double mean = 0.0;
    double std = 1.0;
    double min = 0.0;
    double max = 100.0;
};

/// P(min <= X <= max) for X ~ N(mean, std^2).
double acceptance_probability(TruncNormalParams const& p);
/// Throws ConfigError on min > max, std <= 0 or acceptance below 1e-6.
void validate(TruncNormalParams const& p, std::string_view name);
/// Rejection sampling from N(mean, std^2) restricted to [min, max].
double sample_truncated_normal(TruncNormalParams const& p, RandomStream& rng);

enum class Condition
{
    cardiac,
    respiratory,
    hypothermia_frost,
    none,
};
inline constexpr std::size_t kConditionCount = 3;

enum class OutcomeStatus
{
    unaffected,
    injured_recovered_home,
    injured_recovered_hospital,
    death,
};

struct OccupantOutcome
{
    OutcomeStatus status = OutcomeStatus::unaffected;
    Condition condition = Condition::none;
    bool accessed_healthcare = false;
    bool insured = false;
};

enum class RRWindow
{
    whole_event,
    unpowered_only,
};

struct HazardConfig
{
    RRModel rr = RRModel::default_model();
    ProductivityModel productivity = ProductivityModel::default_model();
    WinterIndexParams wi;
    double delta = 0.0;
    RRWindow rr_window = RRWindow::whole_event;

    // Percentages.
    TruncNormalParams pre_cardiac{5.1, 1.0, 0.0, 100.0};
    TruncNormalParams pre_respiratory{7.3, 1.0, 0.0, 100.0};
    TruncNormalParams access{89.4, 3.0, 0.0, 100.0};
    std::array<TruncNormalParams, kConditionCount> hospital_survival{{
        {89.3, 1.0, 0.0, 100.0},
        {83.0, 1.0, 0.0, 100.0},
        {91.9, 3.0, 0.0, 100.0},
    }};
    std::array<TruncNormalParams, kConditionCount> home_survival{{
        {19.3, 1.0, 0.0, 100.0},
        {13.0, 1.0, 0.0, 100.0},
        {78.9, 1.0, 0.0, 100.0},
    }};
    TruncNormalParams health_insurance{79.4, 3.0, 0.0, 100.0};
    TruncNormalParams home_insurance{95.9, 3.0, 0.0, 100.0};

    void validate() const;
};

/// Branch probabilities in [0, 1] for one occupant in one trial.
struct OutcomeProbabilities
{
    double p_pre_c = 0.0;
    double p_pre_r = 0.0;
    double p_access = 0.0;
    std::array<double, kConditionCount> hospital_surv{};
    std::array<double, kConditionCount> home_surv{};
    double p_heal_ins = 0.0;
};

OutcomeProbabilities draw_outcome_probabilities(HazardConfig const& cfg, RandomStream& rng);

double relative_risk(double t_in, RRModel const& model);
double productivity(double t_in, ProductivityModel const& model);

/// Mean RR over the trace, or over its unpowered steps only (1 if there are none).
double mean_relative_risk(ExposureTrace const& trace, RRModel const& model, RRWindow window = RRWindow::whole_event);
/// clamp(mean_rr - 1 + delta, 0, 1).
double base_mortality(double mean_rr, double delta);
double base_mortality(ExposureTrace const& trace, RRModel const& model, double delta,
                      RRWindow window = RRWindow::whole_event);

/// Sum over steps of (T_L - t_in)(RH - RH_L) where both factors are positive.
/// Throws RangeError when rh and trace lengths differ.
double winter_index(ExposureTrace const& trace, std::vector<double> const& rh, WinterIndexParams const& params);

/// Full outcome tree: at-risk with probability p_mort, then resolve.
OccupantOutcome simulate_occupant_outcome(double p_mort, OutcomeProbabilities const& probs, RandomStream& rng);
/// Steps after the at-risk event: condition, healthcare access, survival, insurance.
OccupantOutcome resolve_at_risk_outcome(OutcomeProbabilities const& probs, RandomStream& rng);

}  // namespace outval
