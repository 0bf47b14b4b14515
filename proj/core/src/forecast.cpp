#include "dfclab/forecast.hpp"

#include <cmath>
#include <numbers>

#include "dfclab/timeutil.hpp"

namespace dfclab::forecast {

const char* to_string(WeatherField f) {
    switch (f) {
        case WeatherField::temp: return "temp";
        case WeatherField::dew: return "dew";
        case WeatherField::hum: return "hum";
        case WeatherField::pres: return "pres";
        case WeatherField::winds: return "winds";
        case WeatherField::solar: return "solar";
    }
    return "?";
}

WeatherField field_from_string(const std::string& name) {
    for (WeatherField f : {WeatherField::temp, WeatherField::dew, WeatherField::hum,
                           WeatherField::pres, WeatherField::winds, WeatherField::solar})
        if (name == to_string(f)) return f;
    throw ValidationError("unknown weather field '" + name + "'");
}

double field_value(const WeatherRecord& r, WeatherField f) {
    switch (f) {
        case WeatherField::temp: return r.temp;
        case WeatherField::dew: return r.dew;
        case WeatherField::hum: return r.hum;
        case WeatherField::pres: return r.pres;
        case WeatherField::winds: return r.winds;
        case WeatherField::solar: return r.solar;
    }
    return 0.0;
}

void WindowSpec::validate() const {
    if (lag_count < 1) throw ValidationError("window spec: lag_count must be >= 1");
    if (feature_columns.empty())
        throw ValidationError("window spec: feature_columns must not be empty");
}

std::vector<double> window_features(std::span<const WeatherRecord> window,
                                    const WindowSpec& spec) {
    if (static_cast<int>(window.size()) != spec.lag_count)
        throw ValidationError("window: expected " + std::to_string(spec.lag_count) +
                              " records, got " + std::to_string(window.size()));
    std::vector<double> x;
    x.reserve(spec.feature_arity());
    for (WeatherField f : spec.feature_columns)
        for (const WeatherRecord& r : window) x.push_back(field_value(r, f));
    if (spec.calendar_features) {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        const std::int64_t ts = window.back().timestamp;
        const double day_phase = timeutil::seconds_of_day(ts) / 86400.0;
        const double year_phase = (timeutil::day_of_year(ts) - 1) / 365.25;
        x.push_back(std::sin(two_pi * day_phase));
        x.push_back(std::cos(two_pi * day_phase));
        x.push_back(std::sin(two_pi * year_phase));
        x.push_back(std::cos(two_pi * year_phase));
    }
    return x;
}

gbdt::Dataset build_rolling_windows(const WeatherSeries& series, const WindowSpec& spec) {
    spec.validate();
    const std::size_t n = series.size();
    const std::size_t lags = static_cast<std::size_t>(spec.lag_count);
    if (n <= lags)
        throw ValidationError("rolling windows: series length " + std::to_string(n) +
                              " must exceed lag_count " + std::to_string(spec.lag_count));

    gbdt::Dataset data(spec.feature_arity());
    data.reserve(n - lags);
    for (std::size_t t = lags - 1; t + 1 < n; ++t) {
        const auto window = series.span().subspan(t + 1 - lags, lags);
        data.add_row(window_features(window, spec),
                     field_value(series[t + 1], spec.target_column));
    }
    return data;
}

RSquared r_squared(std::span<const double> predicted, std::span<const double> actual) {
    if (predicted.size() != actual.size())
        throw ValidationError("r_squared: length mismatch");
    if (actual.size() < 2) throw ValidationError("r_squared: needs at least two points");

    double mean = 0.0;
    for (double a : actual) mean += a;
    mean /= static_cast<double>(actual.size());

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        ss_res += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
        ss_tot += (actual[i] - mean) * (actual[i] - mean);
    }
    if (ss_tot == 0.0) return {0.0, false};
    return {1.0 - ss_res / ss_tot, true};
}

WeatherModel train_weather_model(const WeatherSeries& history, const WindowSpec& spec,
                                 const gbdt::TrainConfig& config) {
    spec.validate();
    config.validate();
    if (history.size() < 2) throw ValidationError("weather model: history too short");
    const double span_days =
        static_cast<double>(history.size()) * history.interval_s() / 86400.0;
    if (span_days < 30.0)
        throw ValidationError("weather model: history spans " + std::to_string(span_days) +
                              " days, need at least 30");

    const gbdt::Dataset all = build_rolling_windows(history, spec);
    const std::size_t n = all.n_rows();
    const std::size_t n_train = static_cast<std::size_t>(static_cast<double>(n) * 0.8);
    if (n_train < 1 || n_train >= n)
        throw ValidationError("weather model: not enough rows for an 80/20 split");

    gbdt::Dataset train_set(all.n_features());
    train_set.reserve(n_train);
    for (std::size_t i = 0; i < n_train; ++i) train_set.add_row(all.row(i), all.target(i));

    WeatherModel wm;
    wm.spec = spec;
    wm.interval_s = history.interval_s();
    wm.model = gbdt::train(train_set, config).model;

    // Held-out evaluation on the chronologically later rows. The persistence
    // baseline predicts the newest lag of the target column.
    const int lag_end = spec.lag_count; // index of the newest target lag within the row
    int target_offset = -1;
    for (std::size_t c = 0; c < spec.feature_columns.size(); ++c)
        if (spec.feature_columns[c] == spec.target_column)
            target_offset = static_cast<int>(c) * spec.lag_count + lag_end - 1;

    std::vector<double> predicted, actual, persisted;
    predicted.reserve(n - n_train);
    for (std::size_t i = n_train; i < n; ++i) {
        predicted.push_back(wm.model.predict(all.row(i)));
        actual.push_back(all.target(i));
        if (target_offset >= 0) persisted.push_back(all.row(i)[target_offset]);
    }
    wm.heldout_r2 = r_squared(predicted, actual);
    if (target_offset >= 0) wm.persistence_r2 = r_squared(persisted, actual);
    return wm;
}

double forecast_step(const WeatherModel& model, std::span<const WeatherRecord> window) {
    return model.model.predict(window_features(window, model.spec));
}

std::vector<WeatherRecord> forecast_rollout_records(const WeatherModel& model,
                                                    std::span<const WeatherRecord> window,
                                                    int steps) {
    if (steps < 1) throw ValidationError("forecast rollout: steps must be >= 1");
    std::vector<WeatherRecord> buf(window.begin(), window.end());
    const std::int64_t dt = static_cast<std::int64_t>(model.interval_s);

    for (int k = 0; k < steps; ++k) {
        const auto lags = std::span<const WeatherRecord>(buf).last(
            static_cast<std::size_t>(model.spec.lag_count));
        const double next_temp = forecast_step(model, lags);
        WeatherRecord next = buf.back(); // persist the columns the model does not predict
        next.timestamp += dt;
        next.temp = next_temp;
        next.dew = std::min(next.dew, next_temp); // keep the record physically consistent
        buf.push_back(next);
    }
    return {buf.end() - steps, buf.end()};
}

std::vector<double> forecast_rollout(const WeatherModel& model,
                                     std::span<const WeatherRecord> window, int steps) {
    const std::vector<WeatherRecord> records = forecast_rollout_records(model, window, steps);
    std::vector<double> out;
    out.reserve(records.size());
    for (const WeatherRecord& r : records) out.push_back(r.temp);
    return out;
}

} // namespace dfclab::forecast
