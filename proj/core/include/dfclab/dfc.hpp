#pragma once

#include <span>
#include <vector>

#include "dfclab/control.hpp"
#include "dfclab/gbdt.hpp"
#include "dfclab/thermal.hpp"
#include "dfclab/weather.hpp"

namespace dfclab::control {

/// Everything the planner's inner simulation needs about the plant.
struct PlantModel {
    thermal::ThermalParams params;
    thermal::HeatPumpParams heat_pump;
    thermal::GainsSchedule gains;
};

struct DfcConfig {
    int horizon = 12;           ///< lookahead H in control steps
    int rounds = 12;            ///< boosting iterations M (0 degenerates to hold-current)
    double learning_rate = 0.3; ///< shrinkage v in (0, 1]
    gbdt::Loss loss = gbdt::Loss::squared;
    int lag_count = 6;          ///< observation history kept for context features
    double tracker_gain = 0.7;  ///< fraction of the balance-solved heat request applied
    int max_leaves = 4;
    int min_samples_leaf = 1;
    bool verify_monotone_loss = false; ///< test mode: fault if the loop loss ever rises

    void validate() const;
};

/// Lagged history the planner sees at invocation time, oldest first.
struct PlannerContext {
    double current_n = 0.0;
    std::vector<double> indoor_lags_c; ///< most recent last; may be empty
    std::vector<double> n_lags;        ///< most recent last; may be empty

    double last_indoor_c(double fallback) const {
        return indoor_lags_c.empty() ? fallback : indoor_lags_c.back();
    }
};

/// Diagnostics of one boosting round: the simulated pass that used the
/// previous reference, and the reference after this round's update.
struct PlanRound {
    std::vector<double> controls;
    std::vector<double> realized_c;
    std::vector<double> reference_after_c;
    double loss = 0.0; ///< sum of per-step losses between targets and realized temps
};

struct PlanResult {
    ControlPlan plan;
    bool triggered = false; ///< false: comfort held under the current control, no boosting ran
    std::vector<double> targets_c;
    std::vector<double> hold_temps_c;
    std::vector<PlanRound> rounds;
};

/// Receding-horizon plan. If the hold-current rollout keeps comfort, returns
/// that plan untouched; otherwise boosts a reference temperature trajectory
/// (constant init, per-round tree updates against the simulated response) and
/// returns the control sequence of the final simulation pass.
PlanResult dfc_plan(const PlantModel& plant, const ComfortSchedule& schedule,
                    const thermal::ThermalState& state,
                    std::span<const forecast::WeatherRecord> forecast_weather,
                    const PlannerContext& context, double dt_s, const DfcConfig& cfg);

/// Heat request of the one-step inverse tracker before gain and clamping.
double tracker_heat_request(const PlantModel& plant, const thermal::ThermalState& state,
                            const forecast::WeatherRecord& outdoor, double t_target_k,
                            double dt_s);

} // namespace dfclab::control
