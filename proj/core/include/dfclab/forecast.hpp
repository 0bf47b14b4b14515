#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dfclab/gbdt.hpp"
#include "dfclab/weather.hpp"

namespace dfclab::forecast {

enum class WeatherField { temp, dew, hum, pres, winds, solar };

const char* to_string(WeatherField f);
WeatherField field_from_string(const std::string& name);
double field_value(const WeatherRecord& r, WeatherField f);

/// Rolling-window layout: for every selected column the L lagged values
/// (oldest first), then, when enabled, hour-of-day and day-of-year sine and
/// cosine pairs taken at the newest lag. The target is the predicted column
/// one step ahead.
struct WindowSpec {
    int lag_count = 6;
    std::vector<WeatherField> feature_columns = {WeatherField::temp, WeatherField::dew,
                                                 WeatherField::hum, WeatherField::pres,
                                                 WeatherField::winds};
    WeatherField target_column = WeatherField::temp;
    bool calendar_features = true;

    int feature_arity() const {
        return lag_count * static_cast<int>(feature_columns.size()) +
               (calendar_features ? 4 : 0);
    }
    void validate() const;
};

/// One dataset row per forecastable step; row count = series length - lag_count.
gbdt::Dataset build_rolling_windows(const WeatherSeries& series, const WindowSpec& spec);

/// Feature vector for a single window; `window` must hold exactly lag_count
/// consecutive records, oldest first.
std::vector<double> window_features(std::span<const WeatherRecord> window,
                                    const WindowSpec& spec);

/// Coefficient of determination. `defined` is false when the actuals have
/// zero variance (the statistic is meaningless there, not an error).
struct RSquared {
    double value = 0.0;
    bool defined = false;
};

RSquared r_squared(std::span<const double> predicted, std::span<const double> actual);

struct WeatherModel {
    gbdt::Ensemble model;
    WindowSpec spec;
    double interval_s = 600.0;
    RSquared heldout_r2;
    RSquared persistence_r2;

    void save(const std::filesystem::path& path) const;
    static WeatherModel load(const std::filesystem::path& path);
};

/// Chronological 80/20 split, boosting on the training segment, held-out R^2
/// and a persistence baseline (next value = current value) on the test segment.
/// Requires at least 30 days of history.
WeatherModel train_weather_model(const WeatherSeries& history, const WindowSpec& spec,
                                 const gbdt::TrainConfig& config);

/// One-step-ahead prediction of the target column, degC for temperature.
double forecast_step(const WeatherModel& model, std::span<const WeatherRecord> window);

/// Recursive multi-step rollout: each predicted temperature is appended as
/// the newest lag; non-forecast columns persist at their latest values.
std::vector<double> forecast_rollout(const WeatherModel& model,
                                     std::span<const WeatherRecord> window, int steps);

/// Same rollout, but returning the synthesized future records (advancing
/// timestamps, predicted temperature, persisted remaining columns).
std::vector<WeatherRecord> forecast_rollout_records(const WeatherModel& model,
                                                    std::span<const WeatherRecord> window,
                                                    int steps);

} // namespace dfclab::forecast
