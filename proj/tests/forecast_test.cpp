#include <cmath>
#include <numbers>
#include <vector>

#include "dfclab/forecast.hpp"
#include "dfclab/timeutil.hpp"
#include "dfclab/weather_io.hpp"
#include "doctest.h"

using namespace dfclab;
using namespace dfclab::forecast;

namespace {

WeatherSeries series_from_temps(const std::vector<double>& temps, double dt = 600.0) {
    std::vector<WeatherRecord> records;
    const std::int64_t t0 = timeutil::utc_from_civil(2023, 3, 1);
    for (std::size_t i = 0; i < temps.size(); ++i) {
        WeatherRecord r;
        r.timestamp = t0 + static_cast<std::int64_t>(i * dt);
        r.temp = temps[i];
        r.dew = temps[i] - 2.0;
        r.hum = 70.0;
        r.pres = 1013.0;
        r.winds = 2.0;
        records.push_back(r);
    }
    return WeatherSeries::from_records(std::move(records));
}

// Noiseless periodic weather: temp is a clean diurnal sinusoid.
WeatherSeries periodic_series(int days) {
    std::vector<double> temps;
    const int per_day = 144;
    for (int i = 0; i < days * per_day; ++i) {
        const double hour = (i % per_day) * 24.0 / per_day;
        temps.push_back(15.0 + 4.0 * std::sin(2.0 * std::numbers::pi * (hour - 8.0) / 24.0));
    }
    return series_from_temps(temps);
}

} // namespace

TEST_CASE("rolling windows: plain enumeration on a tiny series") {
    const WeatherSeries s = series_from_temps({1, 2, 3, 4, 5});
    WindowSpec spec;
    spec.lag_count = 2;
    spec.feature_columns = {WeatherField::temp};
    spec.calendar_features = false;

    const gbdt::Dataset d = build_rolling_windows(s, spec);
    REQUIRE(d.n_rows() == 3);
    REQUIRE(d.n_features() == 2);
    CHECK(d.row(0)[0] == 1.0);
    CHECK(d.row(0)[1] == 2.0);
    CHECK(d.target(0) == 3.0);
    CHECK(d.row(1)[0] == 2.0);
    CHECK(d.row(1)[1] == 3.0);
    CHECK(d.target(1) == 4.0);
    CHECK(d.row(2)[0] == 3.0);
    CHECK(d.row(2)[1] == 4.0);
    CHECK(d.target(2) == 5.0);
}

TEST_CASE("rolling windows: boundary and arity cases") {
    SUBCASE("lag_count = length - 1 gives exactly one row") {
        const WeatherSeries s = series_from_temps({1, 2, 3, 4, 5});
        WindowSpec spec;
        spec.lag_count = 4;
        spec.feature_columns = {WeatherField::temp};
        spec.calendar_features = false;
        const gbdt::Dataset d = build_rolling_windows(s, spec);
        CHECK(d.n_rows() == 1);
        CHECK(d.target(0) == 5.0);
    }
    SUBCASE("mixed columns with calendar terms") {
        const WeatherSeries s = series_from_temps({10, 11, 12});
        WindowSpec spec;
        spec.lag_count = 1;
        spec.feature_columns = {WeatherField::temp, WeatherField::hum};
        spec.calendar_features = true;
        const gbdt::Dataset d = build_rolling_windows(s, spec);
        CHECK(d.n_rows() == 2);
        CHECK(d.n_features() == 2 * 1 + 4);
    }
    SUBCASE("series too short") {
        const WeatherSeries s = series_from_temps({1, 2, 3});
        WindowSpec spec;
        spec.lag_count = 3;
        CHECK_THROWS_AS(build_rolling_windows(s, spec), ValidationError);
    }
}

TEST_CASE("rolling windows: features reconstruct from raw indices, no leakage") {
    const WeatherSeries s = harness::generate_synthetic_weather(5, 2);
    WindowSpec spec;
    spec.lag_count = 6;
    spec.calendar_features = false;
    const gbdt::Dataset d = build_rolling_windows(s, spec);
    REQUIRE(d.n_rows() == s.size() - 6);

    for (std::size_t row = 0; row < d.n_rows(); ++row) {
        const std::size_t newest = row + 5; // newest lag index in the raw series
        std::size_t col = 0;
        for (WeatherField f : spec.feature_columns) {
            for (int lag = 0; lag < 6; ++lag) {
                const std::size_t idx = newest - 5 + lag;
                CHECK(d.row(row)[col] == field_value(s[idx], f));
                CHECK(idx <= newest); // nothing beyond the newest lag leaks in
                ++col;
            }
        }
        CHECK(d.target(row) == s[newest + 1].temp);
    }
}

TEST_CASE("r_squared") {
    const std::vector<double> actual{1, 2, 3};
    SUBCASE("perfect fit") {
        const RSquared r = r_squared(actual, actual);
        CHECK(r.defined);
        CHECK(r.value == 1.0);
    }
    SUBCASE("mean predictor scores zero") {
        const std::vector<double> mean_pred{2, 2, 2};
        CHECK(r_squared(mean_pred, actual).value == doctest::Approx(0.0));
    }
    SUBCASE("hand-computed value") {
        const std::vector<double> pred{1, 2, 4};
        CHECK(r_squared(pred, actual).value == doctest::Approx(0.5));
    }
    SUBCASE("zero variance flags undefined") {
        const std::vector<double> flat{5, 5, 5};
        const RSquared r = r_squared(flat, flat);
        CHECK_FALSE(r.defined);
    }
    SUBCASE("argument errors") {
        CHECK_THROWS_AS(r_squared(std::vector<double>{1}, std::vector<double>{1, 2}),
                        ValidationError);
        CHECK_THROWS_AS(r_squared(std::vector<double>{1}, std::vector<double>{1}),
                        ValidationError);
    }
}

TEST_CASE("train_weather_model: periodic signal fits almost perfectly") {
    const WeatherSeries s = periodic_series(40);
    WindowSpec spec;
    spec.lag_count = 6;
    spec.feature_columns = {WeatherField::temp};
    gbdt::TrainConfig cfg;
    cfg.iterations = 120;
    cfg.learning_rate = 0.2;
    cfg.tree = {31, 2};

    const WeatherModel m = train_weather_model(s, spec, cfg);
    REQUIRE(m.heldout_r2.defined);
    CHECK(m.heldout_r2.value >= 0.99);
}

TEST_CASE("train_weather_model: constant series reports an undefined R^2, no crash") {
    const WeatherSeries s = series_from_temps(std::vector<double>(31 * 144, 9.0));
    WindowSpec spec;
    spec.feature_columns = {WeatherField::temp};
    gbdt::TrainConfig cfg;
    cfg.iterations = 3;
    const WeatherModel m = train_weather_model(s, spec, cfg);
    CHECK_FALSE(m.heldout_r2.defined);
    CHECK(m.model.predict(window_features(s.span().first(6), spec)) == 9.0);
}

TEST_CASE("train_weather_model: insufficient history is an argument error") {
    const WeatherSeries s = series_from_temps(std::vector<double>(10 * 144, 9.0));
    CHECK_THROWS_AS(train_weather_model(s, WindowSpec{}, gbdt::TrainConfig{}),
                    ValidationError);
}

TEST_CASE("forecast_step: determinism, window validation, interpolating round trip") {
    const WeatherSeries s = series_from_temps({3, 1, 4, 1, 5, 9, 2, 6});
    WindowSpec spec;
    spec.lag_count = 2;
    spec.feature_columns = {WeatherField::temp};
    spec.calendar_features = false;

    // Interpolating configuration: one full-depth tree, unit learning rate.
    gbdt::TrainConfig cfg;
    cfg.iterations = 1;
    cfg.learning_rate = 1.0;
    cfg.tree = {64, 1};

    const gbdt::Dataset d = build_rolling_windows(s, spec);
    WeatherModel m;
    m.spec = spec;
    m.interval_s = s.interval_s();
    m.model = gbdt::train(d, cfg).model;

    SUBCASE("training windows reproduce their targets") {
        for (std::size_t row = 0; row < d.n_rows(); ++row) {
            const auto window = s.span().subspan(row, 2);
            CHECK(forecast_step(m, window) == doctest::Approx(d.target(row)).epsilon(1e-12));
        }
    }
    SUBCASE("identical windows give identical forecasts") {
        const auto window = s.span().first(2);
        CHECK(forecast_step(m, window) == forecast_step(m, window));
    }
    SUBCASE("wrong window length is an argument error") {
        CHECK_THROWS_AS(forecast_step(m, s.span().first(3)), ValidationError);
    }
    SUBCASE("rollout records advance the clock and persist columns") {
        const auto future = forecast_rollout_records(m, s.span().first(2), 3);
        REQUIRE(future.size() == 3);
        CHECK(future[0].timestamp == s[1].timestamp + 600);
        CHECK(future[2].timestamp == s[1].timestamp + 3 * 600);
        CHECK(future[0].hum == s[1].hum);
        CHECK(future[0].pres == s[1].pres);
    }
}

TEST_CASE("recursive rollout error grows with the horizon on noisy weather") {
    const WeatherSeries s = harness::generate_synthetic_weather(17, 90);
    WindowSpec spec;
    gbdt::TrainConfig cfg;
    cfg.iterations = 80;
    const std::size_t split = s.size() * 8 / 10;
    const WeatherModel m = train_weather_model(s.slice(0, split), spec, cfg);

    double err1 = 0, err3 = 0, err6 = 0;
    int count = 0;
    for (std::size_t t = split; t + 6 < s.size() - 1; t += 24) {
        const auto window = s.span().subspan(t - 5, 6);
        const std::vector<double> rollout = forecast_rollout(m, window, 6);
        err1 += std::abs(rollout[0] - s[t + 1].temp);
        err3 += std::abs(rollout[2] - s[t + 3].temp);
        err6 += std::abs(rollout[5] - s[t + 6].temp);
        ++count;
    }
    REQUIRE(count > 50);
    CHECK(err1 / count < err3 / count);
    CHECK(err3 / count < err6 / count);
}
