#include "dfclab/scenario.hpp"

#include <fstream>

#include "json.hpp"

namespace dfclab::harness {

using nlohmann::json;

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::rc1: return "rc1";
        case Strategy::rc2: return "rc2";
        case Strategy::dfc: return "dfc";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "rc1") return Strategy::rc1;
    if (name == "rc2") return Strategy::rc2;
    if (name == "dfc") return Strategy::dfc;
    throw ValidationError("unknown strategy '" + name + "' (expected rc1|rc2|dfc)");
}

void WeatherSource::validate() const {
    if (csv_path.has_value() == synthetic.has_value())
        throw ValidationError("scenario: exactly one weather source (csv or synthetic) required");
}

void Scenario::validate() const {
    if (!(dt_s > 0)) throw ValidationError("scenario: dt must be > 0");
    if (duration_days < 1) throw ValidationError("scenario: duration must be at least 1 day");
    if (history_days < 0) throw ValidationError("scenario: history_days must be >= 0");
    thermal.validate();
    heat_pump.validate();
    gains.validate();
    comfort.validate();
    weather.validate();
    forecaster_spec.validate();
    forecaster_train.validate();
    rc1.validate();
    dfc.validate();
}

namespace {

json thermal_to_json(const thermal::ThermalParams& p) {
    return {{"r_ext", p.r_ext},
            {"c_ext", p.c_ext},
            {"r_floor", p.r_floor},
            {"c_floor", p.c_floor},
            {"r_roof", p.r_roof},
            {"c_roof", p.c_roof},
            {"r_int", p.r_int},
            {"c_int", p.c_int},
            {"floor_area", p.floor_area},
            {"c_air", p.c_air},
            {"ventilation_ach", p.ventilation_ach},
            {"solar_aperture", p.solar_aperture},
            {"ground_temp_k", p.ground_temp_k}};
}

thermal::ThermalParams thermal_from_json(const json& j) {
    thermal::ThermalParams p;
    p.r_ext = j.value("r_ext", p.r_ext);
    p.c_ext = j.value("c_ext", p.c_ext);
    p.r_floor = j.value("r_floor", p.r_floor);
    p.c_floor = j.value("c_floor", p.c_floor);
    p.r_roof = j.value("r_roof", p.r_roof);
    p.c_roof = j.value("c_roof", p.c_roof);
    p.r_int = j.value("r_int", p.r_int);
    p.c_int = j.value("c_int", p.c_int);
    p.floor_area = j.value("floor_area", p.floor_area);
    // The default zone-air capacity follows the floor area unless pinned.
    p.c_air = j.value("c_air", thermal::air_volumetric_heat * p.floor_area *
                                   thermal::ceiling_height_m);
    p.ventilation_ach = j.value("ventilation_ach", p.ventilation_ach);
    p.solar_aperture = j.value("solar_aperture", 0.05 * p.floor_area);
    p.ground_temp_k = j.value("ground_temp_k", p.ground_temp_k);
    return p;
}

json weather_to_json(const WeatherSource& w) {
    if (w.csv_path) return {{"csv", *w.csv_path}};
    const SyntheticWeatherConfig& s = *w.synthetic;
    return {{"synthetic",
             {{"seed", s.seed},
              {"days", s.days},
              {"dt_s", s.dt_s},
              {"start_year", s.start_year},
              {"start_day_of_year", s.start_day_of_year},
              {"annual_mean_c", s.annual_mean_c},
              {"annual_amplitude_c", s.annual_amplitude_c},
              {"diurnal_amplitude_c", s.diurnal_amplitude_c},
              {"noise_sigma_c", s.noise_sigma_c},
              {"noise_phi", s.noise_phi},
              {"solar_peak_w_m2", s.solar_peak_w_m2},
              {"solar_winter_floor", s.solar_winter_floor}}}};
}

WeatherSource weather_from_json(const json& j) {
    WeatherSource w;
    if (j.contains("csv")) w.csv_path = j.at("csv").get<std::string>();
    if (j.contains("synthetic")) {
        const json& s = j.at("synthetic");
        SyntheticWeatherConfig cfg;
        cfg.seed = s.value("seed", cfg.seed);
        cfg.days = s.value("days", cfg.days);
        cfg.dt_s = s.value("dt_s", cfg.dt_s);
        cfg.start_year = s.value("start_year", cfg.start_year);
        cfg.start_day_of_year = s.value("start_day_of_year", cfg.start_day_of_year);
        cfg.annual_mean_c = s.value("annual_mean_c", cfg.annual_mean_c);
        cfg.annual_amplitude_c = s.value("annual_amplitude_c", cfg.annual_amplitude_c);
        cfg.diurnal_amplitude_c = s.value("diurnal_amplitude_c", cfg.diurnal_amplitude_c);
        cfg.noise_sigma_c = s.value("noise_sigma_c", cfg.noise_sigma_c);
        cfg.noise_phi = s.value("noise_phi", cfg.noise_phi);
        cfg.solar_peak_w_m2 = s.value("solar_peak_w_m2", cfg.solar_peak_w_m2);
        cfg.solar_winter_floor = s.value("solar_winter_floor", cfg.solar_winter_floor);
        w.synthetic = cfg;
    }
    return w;
}

json core_to_json(const Scenario& s) {
    json doc;
    doc["dt_s"] = s.dt_s;
    doc["duration_days"] = s.duration_days;
    doc["history_days"] = s.history_days;
    doc["thermal"] = thermal_to_json(s.thermal);
    doc["heat_pump"] = {{"q_nominal_w", s.heat_pump.q_nominal},
                        {"eta_carnot", s.heat_pump.eta_carnot},
                        {"cop_max", s.heat_pump.cop_max},
                        {"cop_min", s.heat_pump.cop_min},
                        {"sink_offset_k", s.heat_pump.sink_offset_k}};
    doc["gains"] = {{"occupied_w_m2", s.gains.occupied_w_m2},
                    {"unoccupied_w_m2", s.gains.unoccupied_w_m2},
                    {"start_hour", s.gains.start_hour},
                    {"end_hour", s.gains.end_hour}};
    doc["comfort"] = {{"day_setpoint_c", s.comfort.day_setpoint_c},
                      {"night_setpoint_c", s.comfort.night_setpoint_c},
                      {"band_c", s.comfort.band_c},
                      {"day_start_hour", s.comfort.day_start_hour},
                      {"day_end_hour", s.comfort.day_end_hour}};
    doc["weather"] = weather_to_json(s.weather);
    json cols = json::array();
    for (forecast::WeatherField f : s.forecaster_spec.feature_columns)
        cols.push_back(forecast::to_string(f));
    doc["forecaster"] = {{"lags", s.forecaster_spec.lag_count},
                         {"calendar_features", s.forecaster_spec.calendar_features},
                         {"target_column", forecast::to_string(s.forecaster_spec.target_column)},
                         {"feature_columns", std::move(cols)},
                         {"gbdt",
                          {{"iterations", s.forecaster_train.iterations},
                           {"learning_rate", s.forecaster_train.learning_rate},
                           {"loss", gbdt::to_string(s.forecaster_train.loss)},
                           {"max_leaves", s.forecaster_train.tree.max_leaves},
                           {"min_samples_leaf", s.forecaster_train.tree.min_samples_leaf}}}};
    return doc;
}

} // namespace

std::string Scenario::to_json() const {
    json doc = core_to_json(*this);
    doc["name"] = name;
    doc["strategies"] = {{"rc1", {{"kp", rc1.kp}, {"ki", rc1.ki}, {"kd", rc1.kd}}},
                         {"dfc",
                          {{"horizon", dfc.horizon},
                           {"rounds", dfc.rounds},
                           {"learning_rate", dfc.learning_rate},
                           {"loss", gbdt::to_string(dfc.loss)},
                           {"lag_count", dfc.lag_count},
                           {"tracker_gain", dfc.tracker_gain},
                           {"max_leaves", dfc.max_leaves},
                           {"min_samples_leaf", dfc.min_samples_leaf}}}};
    return doc.dump(2);
}

Scenario Scenario::from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario: invalid JSON: ") + e.what());
    }
    try {
        Scenario s;
        s.name = doc.value("name", s.name);
        s.dt_s = doc.value("dt_s", s.dt_s);
        s.duration_days = doc.value("duration_days", s.duration_days);
        s.history_days = doc.value("history_days", s.history_days);
        if (doc.contains("thermal")) s.thermal = thermal_from_json(doc.at("thermal"));
        if (doc.contains("heat_pump")) {
            const json& h = doc.at("heat_pump");
            s.heat_pump.q_nominal = h.value("q_nominal_w", s.heat_pump.q_nominal);
            s.heat_pump.eta_carnot = h.value("eta_carnot", s.heat_pump.eta_carnot);
            s.heat_pump.cop_max = h.value("cop_max", s.heat_pump.cop_max);
            s.heat_pump.cop_min = h.value("cop_min", s.heat_pump.cop_min);
            s.heat_pump.sink_offset_k = h.value("sink_offset_k", s.heat_pump.sink_offset_k);
        }
        if (doc.contains("gains")) {
            const json& g = doc.at("gains");
            s.gains.occupied_w_m2 = g.value("occupied_w_m2", s.gains.occupied_w_m2);
            s.gains.unoccupied_w_m2 = g.value("unoccupied_w_m2", s.gains.unoccupied_w_m2);
            s.gains.start_hour = g.value("start_hour", s.gains.start_hour);
            s.gains.end_hour = g.value("end_hour", s.gains.end_hour);
        }
        if (doc.contains("comfort")) {
            const json& c = doc.at("comfort");
            s.comfort.day_setpoint_c = c.value("day_setpoint_c", s.comfort.day_setpoint_c);
            s.comfort.night_setpoint_c = c.value("night_setpoint_c", s.comfort.night_setpoint_c);
            s.comfort.band_c = c.value("band_c", s.comfort.band_c);
            s.comfort.day_start_hour = c.value("day_start_hour", s.comfort.day_start_hour);
            s.comfort.day_end_hour = c.value("day_end_hour", s.comfort.day_end_hour);
        }
        if (doc.contains("weather")) s.weather = weather_from_json(doc.at("weather"));
        if (doc.contains("forecaster")) {
            const json& f = doc.at("forecaster");
            s.forecaster_spec.lag_count = f.value("lags", s.forecaster_spec.lag_count);
            s.forecaster_spec.calendar_features =
                f.value("calendar_features", s.forecaster_spec.calendar_features);
            if (f.contains("target_column"))
                s.forecaster_spec.target_column =
                    forecast::field_from_string(f.at("target_column").get<std::string>());
            if (f.contains("feature_columns")) {
                s.forecaster_spec.feature_columns.clear();
                for (const auto& c : f.at("feature_columns"))
                    s.forecaster_spec.feature_columns.push_back(
                        forecast::field_from_string(c.get<std::string>()));
            }
            if (f.contains("gbdt")) {
                const json& g = f.at("gbdt");
                s.forecaster_train.iterations =
                    g.value("iterations", s.forecaster_train.iterations);
                s.forecaster_train.learning_rate =
                    g.value("learning_rate", s.forecaster_train.learning_rate);
                if (g.contains("loss"))
                    s.forecaster_train.loss =
                        gbdt::loss_from_string(g.at("loss").get<std::string>());
                s.forecaster_train.tree.max_leaves =
                    g.value("max_leaves", s.forecaster_train.tree.max_leaves);
                s.forecaster_train.tree.min_samples_leaf =
                    g.value("min_samples_leaf", s.forecaster_train.tree.min_samples_leaf);
            }
        }
        if (doc.contains("strategies")) {
            const json& st = doc.at("strategies");
            if (st.contains("rc1")) {
                const json& r = st.at("rc1");
                s.rc1.kp = r.value("kp", s.rc1.kp);
                s.rc1.ki = r.value("ki", s.rc1.ki);
                s.rc1.kd = r.value("kd", s.rc1.kd);
            }
            if (st.contains("dfc")) {
                const json& d = st.at("dfc");
                s.dfc.horizon = d.value("horizon", s.dfc.horizon);
                s.dfc.rounds = d.value("rounds", s.dfc.rounds);
                s.dfc.learning_rate = d.value("learning_rate", s.dfc.learning_rate);
                if (d.contains("loss"))
                    s.dfc.loss = gbdt::loss_from_string(d.at("loss").get<std::string>());
                s.dfc.lag_count = d.value("lag_count", s.dfc.lag_count);
                s.dfc.tracker_gain = d.value("tracker_gain", s.dfc.tracker_gain);
                s.dfc.max_leaves = d.value("max_leaves", s.dfc.max_leaves);
                s.dfc.min_samples_leaf = d.value("min_samples_leaf", s.dfc.min_samples_leaf);
            }
        }
        s.validate();
        return s;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario: malformed document: ") + e.what());
    }
}

void Scenario::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("scenario: cannot open for writing: " + path.string());
    out << to_json() << '\n';
}

Scenario Scenario::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("scenario: cannot open: " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

std::string Scenario::core_json() const { return core_to_json(*this).dump(); }

std::uint64_t Scenario::fingerprint() const {
    const std::string core = core_json();
    std::uint64_t h = 1469598103934665603ULL; // FNV-1a
    for (unsigned char b : core) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace dfclab::harness
