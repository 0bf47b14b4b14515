#pragma once

#include <cstdint>
#include <filesystem>

#include "dfclab/weather.hpp"

namespace dfclab::harness {

/// Parse and validate a weather CSV (header `timestamp,temp,dew,hum,pres,winds[,solar]`,
/// ISO-8601 UTC timestamps). When target_dt_s > 0 and the source spacing
/// differs, the series is resampled onto that grid by linear interpolation.
forecast::WeatherSeries load_weather_csv(const std::filesystem::path& path,
                                         double target_dt_s = 0.0);

void save_weather_csv(const forecast::WeatherSeries& series,
                      const std::filesystem::path& path);

forecast::WeatherSeries resample_linear(const forecast::WeatherSeries& series,
                                        double target_dt_s);

/// Knobs of the deterministic synthetic generator: annual and diurnal
/// sinusoids plus seeded AR(1) noise per column. The solar column follows a
/// daylight half-sine whose peak scales down toward winter.
struct SyntheticWeatherConfig {
    std::uint64_t seed = 1;
    int days = 30;
    double dt_s = 600.0;
    int start_year = 2023;
    int start_day_of_year = 335; ///< generation begins at local midnight of this day

    double annual_mean_c = 23.0;
    double annual_amplitude_c = 3.5; ///< coldest near mid-January
    double diurnal_amplitude_c = 1.5;
    double noise_sigma_c = 0.25; ///< AR(1) innovation std dev
    double noise_phi = 0.4;

    double solar_peak_w_m2 = 600.0;  ///< clear-sky midsummer noon
    double solar_winter_floor = 0.08; ///< fraction of peak left at midwinter

    void validate() const;
};

forecast::WeatherSeries generate_synthetic_weather(const SyntheticWeatherConfig& config);

/// Convenience overload used by the CLI: defaults except seed/days/dt.
forecast::WeatherSeries generate_synthetic_weather(std::uint64_t seed, int days,
                                                   double dt_s = 600.0);

} // namespace dfclab::harness
