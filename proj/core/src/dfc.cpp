#include "dfclab/dfc.hpp"

#include <cmath>
#include <string>

namespace dfclab::control {

void DfcConfig::validate() const {
    if (horizon < 1) throw ValidationError("dfc: horizon must be >= 1");
    if (rounds < 0) throw ValidationError("dfc: rounds must be >= 0");
    if (!(learning_rate > 0) || learning_rate > 1)
        throw ValidationError("dfc: learning_rate must be in (0, 1]");
    if (lag_count < 1) throw ValidationError("dfc: lag_count must be >= 1");
    if (!(tracker_gain > 0) || tracker_gain > 1)
        throw ValidationError("dfc: tracker_gain must be in (0, 1]");
    if (max_leaves < 1) throw ValidationError("dfc: max_leaves must be >= 1");
    if (min_samples_leaf < 1) throw ValidationError("dfc: min_samples_leaf must be >= 1");
}

double tracker_heat_request(const PlantModel& plant, const thermal::ThermalState& state,
                            const forecast::WeatherRecord& outdoor, double t_target_k,
                            double dt_s) {
    return thermal::required_heat_input(plant.params, state, outdoor, plant.gains,
                                        t_target_k, dt_s);
}

namespace {

struct SimPass {
    std::vector<double> controls;
    std::vector<double> realized_c;
};

// Simulate a fixed control sequence; returns the realized air temperatures.
SimPass simulate_controls(const PlantModel& plant, const thermal::ThermalState& state0,
                          std::span<const forecast::WeatherRecord> weather,
                          std::span<const double> controls, double dt_s) {
    SimPass pass;
    pass.controls.assign(controls.begin(), controls.end());
    pass.realized_c.reserve(controls.size());
    thermal::ThermalState s = state0;
    for (std::size_t i = 0; i < controls.size(); ++i) {
        const thermal::StepOutput out = thermal::step(plant.params, plant.heat_pump, s,
                                                      weather[i], plant.gains, controls[i], dt_s);
        pass.realized_c.push_back(thermal::celsius_from_kelvin(out.next_state.t_air));
        s = out.next_state;
    }
    return pass;
}

// Tracker + rollout: convert the reference trajectory to controls step by
// step against the evolving simulated state.
SimPass track_and_simulate(const PlantModel& plant, const thermal::ThermalState& state0,
                           std::span<const forecast::WeatherRecord> weather,
                           std::span<const double> reference_c, double dt_s,
                           const DfcConfig& cfg) {
    SimPass pass;
    pass.controls.reserve(reference_c.size());
    pass.realized_c.reserve(reference_c.size());
    thermal::ThermalState s = state0;
    for (std::size_t i = 0; i < reference_c.size(); ++i) {
        const double target_k = thermal::kelvin_from_celsius(reference_c[i]);
        const double q = tracker_heat_request(plant, s, weather[i], target_k, dt_s);
        const double n = clamp01(cfg.tracker_gain * q / plant.heat_pump.q_nominal);
        const thermal::StepOutput out =
            thermal::step(plant.params, plant.heat_pump, s, weather[i], plant.gains, n, dt_s);
        pass.controls.push_back(n);
        pass.realized_c.push_back(thermal::celsius_from_kelvin(out.next_state.t_air));
        s = out.next_state;
    }
    return pass;
}

} // namespace

PlanResult dfc_plan(const PlantModel& plant, const ComfortSchedule& schedule,
                    const thermal::ThermalState& state,
                    std::span<const forecast::WeatherRecord> forecast_weather,
                    const PlannerContext& context, double dt_s, const DfcConfig& cfg) {
    cfg.validate();
    schedule.validate();
    if (static_cast<int>(forecast_weather.size()) != cfg.horizon)
        throw ValidationError("dfc_plan: forecast length " +
                              std::to_string(forecast_weather.size()) +
                              " does not match horizon " + std::to_string(cfg.horizon));
    if (!(dt_s > 0)) throw ValidationError("dfc_plan: dt must be > 0");

    const int h = cfg.horizon;
    const double hold_n = clamp01(context.current_n);
    PlanResult result;

    // Comfort targets and clock at each step end.
    std::vector<double> step_tod(h);
    result.targets_c.resize(h);
    for (int i = 0; i < h; ++i) {
        double tod = std::fmod(state.sim_time + (i + 1) * dt_s, 86400.0);
        if (tod < 0) tod += 86400.0;
        step_tod[i] = tod;
        result.targets_c[i] = schedule.setpoint_at(tod);
    }

    // Trigger: hold the current control over the horizon; boost only when that
    // rollout leaves the comfort band somewhere.
    const std::vector<double> hold_controls(static_cast<std::size_t>(h), hold_n);
    const SimPass hold =
        simulate_controls(plant, state, forecast_weather, hold_controls, dt_s);
    result.hold_temps_c = hold.realized_c;
    if (!comfort_violated(hold.realized_c, step_tod, schedule)) {
        result.plan.assign(static_cast<std::size_t>(h), ControlState{hold_n});
        result.triggered = false;
        return result;
    }

    result.triggered = true;
    if (cfg.rounds == 0) { // degenerate planner: no boosting capacity, keep holding
        result.plan.assign(static_cast<std::size_t>(h), ControlState{hold_n});
        return result;
    }

    // Reference trajectory, initialized at the constant minimizing the loss
    // against the horizon's comfort targets.
    std::vector<double> reference(static_cast<std::size_t>(h),
                                  gbdt::init_constant(result.targets_c, cfg.loss));

    const int n_features = 4; // horizon position, forecast temp, lagged indoor, lagged n_set
    double prev_loss = 0.0;
    for (int m = 1; m <= cfg.rounds; ++m) {
        const SimPass pass =
            track_and_simulate(plant, state, forecast_weather, reference, dt_s, cfg);

        double loss = 0.0;
        for (int i = 0; i < h; ++i)
            loss += gbdt::loss_value(cfg.loss, result.targets_c[i], pass.realized_c[i]);
        if (cfg.verify_monotone_loss && m >= 2 && loss > prev_loss + 1e-9)
            throw RuntimeFault("dfc_plan: boosting loss rose from " +
                               std::to_string(prev_loss) + " to " + std::to_string(loss) +
                               " in round " + std::to_string(m));
        prev_loss = loss;

        // Leading + lagging feature rows for this round's tree.
        gbdt::Dataset data(n_features);
        data.reserve(static_cast<std::size_t>(h));
        std::vector<double> residuals(static_cast<std::size_t>(h));
        for (int i = 0; i < h; ++i) {
            const double lag_temp = (i == 0)
                                        ? context.last_indoor_c(thermal::celsius_from_kelvin(
                                              state.t_air))
                                        : pass.realized_c[i - 1];
            const double lag_n = (i == 0) ? hold_n : pass.controls[i - 1];
            const double row[n_features] = {static_cast<double>(i),
                                            forecast_weather[i].temp, lag_temp, lag_n};
            const double r =
                gbdt::negative_gradient(cfg.loss, result.targets_c[i], pass.realized_c[i]);
            if (!std::isfinite(r))
                throw RuntimeFault("dfc_plan: non-finite pseudo-residual");
            data.add_row(row, r);
            residuals[i] = r;
        }

        gbdt::RegressionTree tree =
            gbdt::fit_tree(data, gbdt::TreeConfig{cfg.max_leaves, cfg.min_samples_leaf});

        // Terminal-region values against the realized trajectory (mean of
        // target - realized for squared loss, median for absolute).
        std::vector<std::vector<double>> members(tree.nodes.size());
        std::vector<int> leaf_of(static_cast<std::size_t>(h));
        for (int i = 0; i < h; ++i) {
            leaf_of[i] = tree.find_leaf(data.row(i));
            members[leaf_of[i]].push_back(result.targets_c[i] - pass.realized_c[i]);
        }
        for (std::size_t node = 0; node < tree.nodes.size(); ++node)
            if (tree.nodes[node].is_leaf() && !members[node].empty())
                tree.nodes[node].value = gbdt::leaf_value(members[node], cfg.loss);

        for (int i = 0; i < h; ++i)
            reference[i] += cfg.learning_rate * tree.nodes[leaf_of[i]].value;

        PlanRound round;
        round.controls = pass.controls;
        round.realized_c = pass.realized_c;
        round.reference_after_c = reference;
        round.loss = loss;
        result.rounds.push_back(std::move(round));
    }

    // The algorithm's output is the control sequence of the final simulation
    // pass (the one that used the previous round's reference).
    result.plan.reserve(static_cast<std::size_t>(h));
    for (double n : result.rounds.back().controls) result.plan.push_back(ControlState{n});
    return result;
}

} // namespace dfclab::control
