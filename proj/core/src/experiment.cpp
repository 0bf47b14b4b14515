#include "dfclab/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "dfclab/controllers.hpp"
#include "dfclab/timeutil.hpp"
#include "json.hpp"

namespace dfclab::harness {

using control::ControlState;
using control::Observation;
using forecast::WeatherRecord;
using forecast::WeatherSeries;

namespace {

struct PreparedWeather {
    WeatherSeries history; ///< may be empty for strategies that need no forecaster
    WeatherSeries eval;
};

PreparedWeather prepare_weather(const Scenario& s) {
    const std::size_t steps_per_day = static_cast<std::size_t>(86400.0 / s.dt_s);
    const std::size_t eval_steps = steps_per_day * static_cast<std::size_t>(s.duration_days);

    if (s.weather.synthetic) {
        // Generate history_days ahead of the requested evaluation start so the
        // forecaster trains on the season leading into the experiment.
        SyntheticWeatherConfig cfg = *s.weather.synthetic;
        cfg.dt_s = s.dt_s;
        cfg.days = s.history_days + s.duration_days;
        const std::int64_t eval_start =
            timeutil::utc_from_civil(cfg.start_year, 1, 1) +
            static_cast<std::int64_t>(cfg.start_day_of_year - 1) * 86400;
        const std::int64_t gen_start =
            eval_start - static_cast<std::int64_t>(s.history_days) * 86400;
        const timeutil::CivilDate cd = timeutil::civil_from_days(gen_start / 86400);
        cfg.start_year = cd.year;
        cfg.start_day_of_year =
            static_cast<int>(gen_start / 86400 - timeutil::days_from_civil(cd.year, 1, 1)) + 1;

        const WeatherSeries all = generate_synthetic_weather(cfg);
        const std::size_t history_steps = steps_per_day * static_cast<std::size_t>(s.history_days);
        PreparedWeather out;
        if (history_steps > 0) out.history = all.slice(0, history_steps);
        out.eval = all.slice(history_steps, eval_steps);
        return out;
    }

    const WeatherSeries all = load_weather_csv(*s.weather.csv_path, s.dt_s);
    if (all.size() < eval_steps)
        throw ValidationError("scenario: weather file covers " + std::to_string(all.size()) +
                              " steps, need " + std::to_string(eval_steps));
    PreparedWeather out;
    const std::size_t history_steps = all.size() - eval_steps;
    if (history_steps > 0) out.history = all.slice(0, history_steps);
    out.eval = all.slice(history_steps, eval_steps);
    return out;
}

} // namespace

ExperimentResult run_experiment(const Scenario& scenario, Strategy strategy) {
    scenario.validate();

    const PreparedWeather weather = prepare_weather(scenario);
    const WeatherSeries& eval = weather.eval;
    const double dt = scenario.dt_s;

    control::PlantModel plant{scenario.thermal, scenario.heat_pump, scenario.gains};

    // The forecaster is part of the DFC strategy only.
    std::unique_ptr<forecast::WeatherModel> forecaster;
    if (strategy == Strategy::dfc) {
        if (weather.history.empty())
            throw ValidationError("scenario: dfc requires forecaster training history");
        forecaster = std::make_unique<forecast::WeatherModel>(train_weather_model(
            weather.history, scenario.forecaster_spec, scenario.forecaster_train));
    }

    std::unique_ptr<control::Controller> controller;
    control::DfcController* dfc_controller = nullptr;
    switch (strategy) {
        case Strategy::rc1:
            controller = std::make_unique<control::PidController>(scenario.rc1, dt);
            break;
        case Strategy::rc2:
            controller = std::make_unique<control::Rc2Controller>(scenario.comfort);
            break;
        case Strategy::dfc: {
            auto c = std::make_unique<control::DfcController>(
                plant, scenario.comfort, scenario.dfc, forecaster.get(), dt);
            dfc_controller = c.get();
            controller = std::move(c);
            break;
        }
    }
    control::Rc2Controller warmup_seed(scenario.comfort);

    // All nodes start at the night setpoint; the clock is anchored so that
    // seconds_of_day matches the evaluation window's wall clock.
    const double sim_time0 = timeutil::seconds_of_day(eval[0].timestamp);
    thermal::ThermalState state = thermal::ThermalState::uniform(
        thermal::kelvin_from_celsius(scenario.comfort.night_setpoint_c), sim_time0);

    ExperimentResult result;
    result.strategy = to_string(strategy);
    result.scenario_fingerprint = scenario.fingerprint();
    result.duration_days = scenario.duration_days;
    result.dt_s = dt;
    result.floor_area_m2 = scenario.thermal.floor_area;
    result.trace.reserve(eval.size());

    double total_heat_j = 0.0;
    std::size_t occupied_steps = 0, occupied_violations = 0;
    std::size_t night_steps = 0, night_violations = 0;

    for (std::size_t k = 0; k < eval.size(); ++k) {
        const WeatherRecord& rec = eval[k];
        Observation obs;
        obs.state = state;
        obs.measured_c = thermal::celsius_from_kelvin(state.t_air);
        obs.setpoint_c = scenario.comfort.setpoint_at(state.seconds_of_day());
        obs.weather = rec;

        ControlState action;
        try {
            action = controller->step(obs);
        } catch (const WarmUpError&) {
            action = warmup_seed.step(obs);
            if (dfc_controller) dfc_controller->note_applied(action);
        }

        thermal::StepOutput out;
        try {
            out = thermal::step(scenario.thermal, scenario.heat_pump, state, rec,
                                scenario.gains, action.n_set, dt);
        } catch (const thermal::SimulationFault& e) {
            throw RuntimeFault("experiment aborted at step " + std::to_string(k) + ": " +
                               e.what());
        }

        TraceRow row;
        row.timestamp = rec.timestamp;
        row.hours = (state.sim_time - sim_time0) / 3600.0;
        row.t_air_c = obs.measured_c;
        row.n_set = action.n_set;
        row.p_el_w = out.p_el;
        row.q_heat_w = out.q_heat;
        row.cop = out.cop;
        row.outdoor_c = rec.temp;
        row.solar_w_m2 = rec.solar;
        row.setpoint_c = obs.setpoint_c;
        row.occupied = scenario.comfort.day_at(state.seconds_of_day());
        result.trace.push_back(row);

        const bool violated = obs.measured_c < obs.setpoint_c - scenario.comfort.band_c ||
                              obs.measured_c > obs.setpoint_c + scenario.comfort.band_c;
        if (row.occupied) {
            ++occupied_steps;
            occupied_violations += violated ? 1 : 0;
        } else {
            ++night_steps;
            night_violations += violated ? 1 : 0;
        }

        result.electrical_energy_j += out.p_el * dt;
        total_heat_j += out.q_heat * dt;
        state = out.next_state;
    }

    result.energy_kwh_per_day_m2 = result.electrical_energy_j / 3.6e6 /
                                   static_cast<double>(scenario.duration_days) /
                                   scenario.thermal.floor_area;
    result.violation_fraction_occupied =
        occupied_steps ? static_cast<double>(occupied_violations) /
                             static_cast<double>(occupied_steps)
                       : 0.0;
    result.violation_fraction_night =
        night_steps ? static_cast<double>(night_violations) / static_cast<double>(night_steps)
                    : 0.0;
    result.mean_cop =
        result.electrical_energy_j > 0 ? total_heat_j / result.electrical_energy_j : 0.0;
    return result;
}

std::string ExperimentResult::to_json() const {
    nlohmann::json doc;
    doc["strategy"] = strategy;
    doc["scenario_fingerprint"] = scenario_fingerprint;
    doc["duration_days"] = duration_days;
    doc["dt_s"] = dt_s;
    doc["floor_area_m2"] = floor_area_m2;
    doc["energy_kwh_per_day_m2"] = energy_kwh_per_day_m2;
    doc["violation_fraction_occupied"] = violation_fraction_occupied;
    doc["violation_fraction_night"] = violation_fraction_night;
    doc["mean_cop"] = mean_cop;
    doc["electrical_energy_j"] = electrical_energy_j;
    auto& rows = doc["trace"] = nlohmann::json::array();
    for (const TraceRow& r : trace)
        rows.push_back({r.timestamp, r.t_air_c, r.n_set, r.p_el_w, r.q_heat_w, r.cop,
                        r.outdoor_c, r.solar_w_m2, r.setpoint_c, r.occupied});
    return doc.dump();
}

void ExperimentResult::write_trace_csv(const std::vector<TraceRow>& trace,
                                       const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("trace: cannot open for writing: " + path.string());
    out << "timestamp,hours,t_air_c,n_set,p_el_w,q_heat_w,cop,outdoor_c,solar_w_m2,"
           "setpoint_c,occupied\n";
    char buf[256];
    for (const TraceRow& r : trace) {
        std::snprintf(buf, sizeof(buf),
                      "%s,%.4f,%.6f,%.6f,%.3f,%.3f,%.4f,%.4f,%.2f,%.2f,%d\n",
                      timeutil::format_iso8601_utc(r.timestamp).c_str(), r.hours, r.t_air_c,
                      r.n_set, r.p_el_w, r.q_heat_w, r.cop, r.outdoor_c, r.solar_w_m2,
                      r.setpoint_c, r.occupied ? 1 : 0);
        out << buf;
    }
}

void ExperimentResult::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / ("result_" + strategy + ".json"));
        if (!out) throw ValidationError("result: cannot write into " + dir.string());
        out << to_json() << '\n';
    }
    write_trace_csv(trace, dir / ("trace_" + strategy + ".csv"));
}

double percent_saving(double baseline, double other) {
    if (baseline == 0.0) return 0.0;
    return (baseline - other) / baseline * 100.0;
}

Comparison compare(std::span<const ExperimentResult> results) {
    if (results.size() < 2)
        throw ValidationError("compare: need at least two results");
    for (const ExperimentResult& r : results)
        if (r.scenario_fingerprint != results[0].scenario_fingerprint)
            throw ValidationError("compare: results come from different scenario cores");

    Comparison cmp;
    const double baseline = results[0].energy_kwh_per_day_m2;
    for (const ExperimentResult& r : results) {
        ComparisonRow row;
        row.strategy = r.strategy;
        row.energy_kwh_per_day_m2 = r.energy_kwh_per_day_m2;
        row.saving_pct = percent_saving(baseline, r.energy_kwh_per_day_m2);
        row.violation_fraction_occupied = r.violation_fraction_occupied;
        row.mean_cop = r.mean_cop;
        cmp.rows.push_back(row);
    }
    return cmp;
}

std::string Comparison::format_table() const {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-8s %18s %10s %12s %9s\n", "strategy",
                  "kWh/(day*m^2)", "saving", "violations", "mean COP");
    out << buf;
    for (const ComparisonRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-8s %18.4f %9.1f%% %11.2f%% %9.2f\n",
                      r.strategy.c_str(), r.energy_kwh_per_day_m2, r.saving_pct,
                      100.0 * r.violation_fraction_occupied, r.mean_cop);
        out << buf;
    }
    return out.str();
}

std::string Comparison::to_json() const {
    nlohmann::json doc = nlohmann::json::array();
    for (const ComparisonRow& r : rows)
        doc.push_back({{"strategy", r.strategy},
                       {"energy_kwh_per_day_m2", r.energy_kwh_per_day_m2},
                       {"saving_pct", r.saving_pct},
                       {"violation_fraction_occupied", r.violation_fraction_occupied},
                       {"mean_cop", r.mean_cop}});
    return doc.dump(2);
}

} // namespace dfclab::harness
